#include "bladeprog/csvio.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>

#include "bladeprog/errors.hpp"

namespace bladeprog::csvio {

std::string format_number(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

bool LineReader::next(std::string& line) {
    if (!std::getline(in_, line)) return false;
    ++line_number_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_number_ == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    return true;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

namespace {

[[noreturn]] void fail_parse(std::string_view field, std::size_t line_number,
                             std::string_view column) {
    throw ValidationError("line " + std::to_string(line_number) + ": cannot parse " +
                          std::string(column) + " value '" + std::string(field) + "'");
}

}  // namespace

double parse_double(std::string_view field, std::size_t line_number, std::string_view column) {
    double value = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || field.empty()) {
        fail_parse(field, line_number, column);
    }
    return value;
}

std::int64_t parse_int(std::string_view field, std::size_t line_number, std::string_view column) {
    std::int64_t value = 0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || field.empty()) {
        fail_parse(field, line_number, column);
    }
    return value;
}

void expect_header(LineReader& reader, std::string_view expected) {
    std::string line;
    if (!reader.next(line)) {
        throw ValidationError("empty input: expected header '" + std::string(expected) + "'");
    }
    if (line != expected) {
        throw ValidationError("line 1: expected header '" + std::string(expected) + "', got '" +
                              line + "'");
    }
}

}  // namespace bladeprog::csvio
