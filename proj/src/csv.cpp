// Apache License, Version 2.0, refer to LICENSE.txt

#include "gridpop/csv.hpp"

#include "gridpop/errors.hpp"

namespace gridpop::csv {

std::string escape_field(std::string_view field)
{
    const bool needs_quotes =
      field.find_first_of(",\"\n\r") != std::string_view::npos;
    if (!needs_quotes) {
        return std::string(field);
    }
    std::string out;
    out.reserve(field.size() + 2);
    out.push_back('"');
    for (char c : field) {
        if (c == '"') {
            out.push_back('"');
        }
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::vector<std::string> split_record(std::string_view line)
{
    std::vector<std::string> fields;
    std::string current;
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    current.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                current.push_back(c);
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            fields.push_back(std::move(current));
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    if (in_quotes) {
        throw ParseError("csv record has an unterminated quoted field");
    }
    fields.push_back(std::move(current));
    return fields;
}

std::vector<std::vector<std::string>> read_records(std::istream& in)
{
    std::vector<std::vector<std::string>> records;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        records.push_back(split_record(line));
    }
    return records;
}

std::string join_record(const std::vector<std::string>& fields)
{
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) {
            out.push_back(',');
        }
        out += escape_field(fields[i]);
    }
    return out;
}

} // namespace gridpop::csv
