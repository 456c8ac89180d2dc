// Apache License, Version 2.0, refer to LICENSE.txt

#include "gridpop/errors.hpp"

namespace gridpop {

const char* to_string(ErrorCategory cat)
{
    switch (cat) {
        case ErrorCategory::ParseError:
            return "ParseError";
        case ErrorCategory::CrsMismatch:
            return "CrsMismatch";
        case ErrorCategory::IoFailure:
            return "IoFailure";
    }
    return "ParseError";
}

} // namespace gridpop
