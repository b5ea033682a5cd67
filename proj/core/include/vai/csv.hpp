#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace vai::csv {

struct Row {
    std::size_t line = 0;  ///< 1-based physical line where the record starts
    std::vector<std::string> fields;
};

/// RFC 4180 reader: quoted fields, doubled quotes, CRLF or LF line ends.
/// A leading UTF-8 BOM is skipped; blank lines are dropped.
std::vector<Row> parse(std::string_view text);

std::string escape(std::string_view field);
std::string join(const std::vector<std::string>& fields);

/// Shortest round-trip decimal representation of a finite double.
std::string format_double(double v);

}  // namespace vai::csv
