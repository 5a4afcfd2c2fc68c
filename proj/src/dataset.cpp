#include "catchannel/dataset.hpp"

#include <charconv>
#include <cmath>
#include <json.hpp>
#include <limits>
#include <ostream>

#include "catchannel/errors.hpp"

namespace catchannel {
namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + '"';
}

}  // namespace

std::size_t Table::column_index(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw InvalidArgument("no column named " + std::string(name));
}

std::vector<double> Table::numeric_column(std::string_view name) const {
  const std::size_t idx = column_index(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) {
    const double* v = std::get_if<double>(&row[idx]);
    out.push_back(v ? *v : std::numeric_limits<double>::quiet_NaN());
  }
  return out;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& out, const Table& table) {
  out << "# catchannel v" << kVersion << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out << (i ? "," : "") << csv_field(table.columns[i]);
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      if (const double* v = std::get_if<double>(&row[i])) {
        out << format_number(*v);
      } else {
        out << csv_field(std::get<std::string>(row[i]));
      }
    }
    out << '\n';
  }
  for (const auto& [key, value] : table.notes) out << "# " << key << ": " << value << '\n';
}

void write_json(std::ostream& out, const Table& table) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (const double* v = std::get_if<double>(&row[i])) {
        // JSON has no nan/inf
        obj[table.columns[i]] = std::isfinite(*v) ? nlohmann::ordered_json(*v) : nlohmann::ordered_json();
      } else {
        obj[table.columns[i]] = std::get<std::string>(row[i]);
      }
    }
    arr.push_back(std::move(obj));
  }
  out << arr.dump(1) << '\n';
}

}  // namespace catchannel
