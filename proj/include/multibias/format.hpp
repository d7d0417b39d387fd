#pragma once

// Plain-text rendering in the style of R's default print: numbers to 7
// significant digits, numeric columns sharing one number of decimals.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <system_error>
#include <vector>

namespace multibias::format {

/// `%.<digits>g`, e.g. 2.269737.
inline std::string significant(double x, int digits = 7) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

/// Shortest text that reads back as the same double.
inline std::string exact(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return ec == std::errc{} ? std::string(buf, end) : significant(x, 17);
}

inline std::string fixed(double x, int decimals) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
  return buf;
}

/// Decimals needed to show `x` to `digits` significant digits, trailing zeros dropped.
inline int decimals_needed(double x, int digits = 7) {
  if (x == 0.0 || !std::isfinite(x)) return 0;
  const int magnitude = static_cast<int>(std::floor(std::log10(std::abs(x))));
  int d = std::max(0, digits - 1 - magnitude);
  std::string s = fixed(x, d);
  while (d > 0 && s.back() == '0') {
    s.pop_back();
    --d;
  }
  return d;
}

/// One column of a numeric matrix, NA for absent entries.
inline std::vector<std::string> numeric_column(const std::vector<std::optional<double>>& col,
                                               int digits = 7) {
  int d = 0;
  for (const auto& v : col)
    if (v) d = std::max(d, decimals_needed(*v, digits));
  std::vector<std::string> out;
  for (const auto& v : col) out.push_back(v ? fixed(*v, d) : "NA");
  return out;
}

inline std::string pad_left(const std::string& s, std::size_t w) {
  return s.size() >= w ? s : std::string(w - s.size(), ' ') + s;
}
inline std::string pad_right(const std::string& s, std::size_t w) {
  return s.size() >= w ? s : s + std::string(w - s.size(), ' ');
}

/// Row names left-aligned, column headers and cells right-aligned.
inline std::string table(const std::vector<std::string>& row_names,
                         const std::vector<std::string>& headers,
                         const std::vector<std::vector<std::string>>& columns) {
  std::size_t name_w = 0;
  for (const auto& r : row_names) name_w = std::max(name_w, r.size());
  std::vector<std::size_t> widths;
  for (std::size_t j = 0; j < headers.size(); ++j) {
    std::size_t w = headers[j].size();
    for (const auto& cell : columns[j]) w = std::max(w, cell.size());
    widths.push_back(w);
  }
  std::string out = std::string(name_w, ' ');
  for (std::size_t j = 0; j < headers.size(); ++j) out += ' ' + pad_left(headers[j], widths[j]);
  out += '\n';
  for (std::size_t i = 0; i < row_names.size(); ++i) {
    out += pad_right(row_names[i], name_w);
    for (std::size_t j = 0; j < headers.size(); ++j) out += ' ' + pad_left(columns[j][i], widths[j]);
    out += '\n';
  }
  return out;
}

/// RFC 4180 field quoting.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace multibias::format
