#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nshyd {

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  /// Index of a column; std::out_of_range if absent.
  std::size_t index(const std::string& name) const;
  std::vector<double> column(const std::string& name) const;
  /// The named columns in table order; all columns when names is empty.
  Table select(const std::vector<std::string>& names) const;
};

/// Header row, then one line per row, values as %.17g.
void write_csv(std::ostream& out, const Table& t);
void write_csv(const std::string& path, const Table& t);
std::string format_value(double x);

}  // namespace nshyd
