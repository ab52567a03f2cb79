#include "nshyd/table.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace nshyd {

std::size_t Table::index(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw std::out_of_range("table has no column '" + name + "'");
  return static_cast<std::size_t>(it - columns.begin());
}

std::vector<double> Table::column(const std::string& name) const {
  const std::size_t k = index(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[k]);
  return out;
}

Table Table::select(const std::vector<std::string>& names) const {
  if (names.empty()) return *this;
  std::vector<std::size_t> keep;
  for (std::size_t k = 0; k < columns.size(); ++k)
    if (std::find(names.begin(), names.end(), columns[k]) != names.end()) keep.push_back(k);
  Table out;
  for (std::size_t k : keep) out.columns.push_back(columns[k]);
  out.rows.reserve(rows.size());
  for (const auto& r : rows) {
    std::vector<double> row;
    row.reserve(keep.size());
    for (std::size_t k : keep) row.push_back(r[k]);
    out.rows.push_back(std::move(row));
  }
  return out;
}

std::string format_value(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_csv(std::ostream& out, const Table& t) {
  for (std::size_t k = 0; k < t.columns.size(); ++k) out << (k ? "," : "") << t.columns[k];
  out << '\n';
  for (const auto& r : t.rows) {
    for (std::size_t k = 0; k < r.size(); ++k) out << (k ? "," : "") << format_value(r[k]);
    out << '\n';
  }
}

void write_csv(const std::string& path, const Table& t) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_csv(out, t);
  if (!out) throw std::runtime_error("error writing '" + path + "'");
}

}  // namespace nshyd
