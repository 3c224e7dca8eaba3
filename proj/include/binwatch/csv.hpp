#pragma once

// Minimal CSV helpers: comma-separated, no quoting, header row required.

#include <charconv>
#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace binwatch::csv {

std::vector<std::string_view> split(std::string_view line);

/// Reads one line, stripping a trailing '\r'. Returns false at EOF.
bool read_line(std::istream& in, std::string& line);

std::optional<std::int64_t> parse_int(std::string_view s);
std::optional<double> parse_double(std::string_view s);

/// Shortest representation that round-trips through parse_double.
std::string format_double(double v);

/// Fixed-point with `decimals` digits, for human-facing tables.
std::string format_fixed(double v, int decimals);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Throws DataError on an empty stream and ParseError on a row whose column
/// count differs from the header.
Table read_table(std::istream& in);

}  // namespace binwatch::csv
