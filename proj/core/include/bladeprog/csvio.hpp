#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace bladeprog::csvio {

/// Decimal rendering with 12 significant digits, used by every CSV writer so
/// pipeline outputs are reproducible byte for byte.
std::string format_number(double value);

/// Reads lines with LF/CRLF endings, tracking 1-based line numbers. Strips a
/// UTF-8 BOM from the first line.
class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    bool next(std::string& line);
    std::size_t line_number() const { return line_number_; }

private:
    std::istream& in_;
    std::size_t line_number_ = 0;
};

std::vector<std::string_view> split_fields(std::string_view line);

double parse_double(std::string_view field, std::size_t line_number, std::string_view column);
std::int64_t parse_int(std::string_view field, std::size_t line_number, std::string_view column);

/// Consumes the first line and checks it equals `expected` exactly.
void expect_header(LineReader& reader, std::string_view expected);

}  // namespace bladeprog::csvio
