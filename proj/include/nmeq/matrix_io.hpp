#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "nmeq/errors.hpp"
#include "nmeq/matrix.hpp"

namespace nmeq {

/// Matrix text format: optional leading '#' comment lines, one "rows cols"
/// header line, then rows whitespace-separated data lines. Values are
/// printed with 17 significant digits so write/read round-trips exactly.

inline void write_matrix(const Matrix& m, std::ostream& out) {
  out << m.rows() << ' ' << m.cols() << '\n';
  char buf[64];
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
      out << (j ? " " : "") << buf;
    }
    out << '\n';
  }
}

inline void write_matrix(const Matrix& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("write_matrix: cannot open " + path);
  write_matrix(m, out);
  if (!out) throw IoError("write_matrix: write failed for " + path);
}

inline Matrix read_matrix(std::istream& in, const std::string& name = "<stream>") {
  std::string line;
  // Skip comments and blank lines before the header.
  while (std::getline(in, line)) {
    const auto pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos) continue;
    if (line[pos] == '#') continue;
    break;
  }
  if (!in && line.empty()) throw ParseError("read_matrix: no header line in " + name);

  Index rows = 0, cols = 0;
  {
    std::istringstream hdr(line);
    if (!(hdr >> rows >> cols) || rows < 1 || cols < 1)
      throw ParseError("read_matrix: bad header '" + line + "' in " + name);
  }
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    do {
      if (!std::getline(in, line)) throw ParseError("read_matrix: truncated data in " + name);
      const auto pos = line.find_first_not_of(" \t\r");
      if (pos != std::string::npos && line[pos] != '#') break;
    } while (true);
    std::istringstream row(line);
    for (Index j = 0; j < cols; ++j) {
      if (!(row >> m(i, j)))
        throw ParseError("read_matrix: bad value at row " + std::to_string(i) + " in " + name);
    }
    double extra;
    if (row >> extra) throw ParseError("read_matrix: extra values at row " + std::to_string(i) +
                                       " in " + name);
  }
  return m;
}

inline Matrix read_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("read_matrix: cannot open " + path);
  return read_matrix(in, path);
}

}  // namespace nmeq
