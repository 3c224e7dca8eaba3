#include "binwatch/csv.hpp"

#include <array>
#include <cmath>
#include <cstdio>

#include "binwatch/error.hpp"

namespace binwatch::csv {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

bool read_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

std::optional<std::int64_t> parse_int(std::string_view s) {
  std::int64_t v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end || s.empty()) return std::nullopt;
  return v;
}

std::optional<double> parse_double(std::string_view s) {
  double v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end || s.empty() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return {buf.data(), ptr};
}

std::string format_fixed(double v, int decimals) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                 std::chars_format::fixed, decimals);
  return {buf.data(), ptr};
}

Table read_table(std::istream& in) {
  Table t;
  std::string line;
  if (!read_line(in, line) || line.empty()) throw DataError("empty file (missing header)");
  for (auto f : split(line)) t.header.emplace_back(f);
  std::size_t row = 1;
  while (read_line(in, line)) {
    ++row;
    if (line.empty()) continue;
    auto fields = split(line);
    if (fields.size() != t.header.size()) {
      throw ParseError(row, "expected " + std::to_string(t.header.size()) + " columns, got " +
                                std::to_string(fields.size()));
    }
    t.rows.emplace_back(fields.begin(), fields.end());
  }
  return t;
}

}  // namespace binwatch::csv
