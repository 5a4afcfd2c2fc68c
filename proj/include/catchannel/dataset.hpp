#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace catchannel {

inline constexpr std::string_view kVersion = "0.1.0";

using Cell = std::variant<double, std::string>;

/// Row-major table with named columns. Notes are emitted as "# key: value"
/// comment lines after the rows (CSV) so the first two lines stay the
/// version banner and the column header.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::pair<std::string, std::string>> notes;

  /// Index of `name`; throws InvalidArgument if absent.
  std::size_t column_index(std::string_view name) const;
  /// Numeric column; string cells become NaN.
  std::vector<double> numeric_column(std::string_view name) const;
};

/// Shortest-exact 17 significant digits, locale independent.
std::string format_number(double v);

void write_csv(std::ostream& out, const Table& table);
/// Flat array of row objects keyed by column name.
void write_json(std::ostream& out, const Table& table);

}  // namespace catchannel
