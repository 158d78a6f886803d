#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "young/errors.hpp"
#include "young/grid_path.hpp"

namespace young {

// GridPath CSV schema: header "t,v1,...,vm", one row per grid point,
// 17 significant digits so read(write(p)) reproduces p exactly.

inline std::string format_full(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline void write_csv(std::ostream& os, const GridPathd& p) {
  os << "t";
  for (Index j = 0; j < p.dimension(); ++j) os << ",v" << (j + 1);
  os << "\n";
  for (Index i = 0; i < p.size(); ++i) {
    os << format_full(p.times(i));
    for (Index j = 0; j < p.dimension(); ++j)
      os << "," << format_full(p.values(i, j));
    os << "\n";
  }
}

inline void write_csv(const std::string& path, const GridPathd& p) {
  std::ofstream os(path);
  if (!os) throw precondition_error("cannot open for writing: " + path);
  write_csv(os, p);
}

inline GridPathd read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line))
    throw precondition_error("CSV: empty input");
  std::vector<double> ts;
  std::vector<std::vector<double>> rows;
  Index dim = -1;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() < 2) throw precondition_error("CSV: row with < 2 columns");
    if (dim < 0)
      dim = static_cast<Index>(row.size()) - 1;
    else if (static_cast<Index>(row.size()) - 1 != dim)
      throw precondition_error("CSV: ragged rows");
    ts.push_back(row[0]);
    row.erase(row.begin());
    rows.push_back(std::move(row));
  }
  if (ts.empty()) throw precondition_error("CSV: no data rows");
  GridPathd p;
  p.times.resize(static_cast<Index>(ts.size()));
  p.values.resize(static_cast<Index>(ts.size()), dim);
  for (Index i = 0; i < p.times.size(); ++i) {
    p.times(i) = ts[static_cast<std::size_t>(i)];
    for (Index j = 0; j < dim; ++j)
      p.values(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  p.validate();
  return p;
}

inline GridPathd read_csv_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw precondition_error("cannot open for reading: " + path);
  return read_csv(is);
}

}  // namespace young
