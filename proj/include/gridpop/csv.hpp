// Apache License, Version 2.0, refer to LICENSE.txt

#ifndef GRIDPOP_CSV_HPP
#define GRIDPOP_CSV_HPP

#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace gridpop::csv {

/// Quotes a field per RFC 4180 when it contains a comma, quote, or newline.
std::string escape_field(std::string_view field);

/// Splits one CSV record, honouring quoted fields. Throws ParseError on a
/// dangling quote.
std::vector<std::string> split_record(std::string_view line);

/// Reads all records from a stream (UTF-8, '\n' line endings; a trailing
/// '\r' per line is tolerated). Blank trailing lines are ignored.
std::vector<std::vector<std::string>> read_records(std::istream& in);

std::string join_record(const std::vector<std::string>& fields);

} // namespace gridpop::csv

#endif // GRIDPOP_CSV_HPP
