#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace dentvis::app {

using CsvRow = std::vector<std::string>;

/// RFC 4180 style: comma separated, optional double-quoted fields with "" escapes,
/// LF or CRLF line ends. Blank lines are skipped.
std::vector<CsvRow> parse_csv(std::string_view text);

/// Quotes a field only when it contains a comma, quote or newline.
std::string csv_field(std::string_view v);

void write_csv_row(std::ostream& out, const CsvRow& row);

/// Fixed-point text with `digits` decimals.
std::string fixed(double v, int digits);

}  // namespace dentvis::app
