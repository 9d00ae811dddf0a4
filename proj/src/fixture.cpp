#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "panella/matstore.hpp"

namespace panella {

ColMatrix read_fixture(std::istream& in) {
  int m = -1;
  int n = -1;
  if (!(in >> m >> n) || m < 0 || n < 0) {
    throw std::runtime_error("fixture: malformed header, expected \"m n\"");
  }
  ColMatrix A(m, n);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      if (!(in >> A(i, j))) {
        throw std::runtime_error("fixture: missing element (" + std::to_string(i) + ", " +
                                 std::to_string(j) + ")");
      }
    }
  }
  return A;
}

ColMatrix read_fixture_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("fixture: cannot open " + path);
  return read_fixture(in);
}

void write_fixture(std::ostream& out, const ColMatrix& A) {
  out << A.rows() << ' ' << A.cols() << '\n';
  char buf[32];
  for (int i = 0; i < A.rows(); ++i) {
    for (int j = 0; j < A.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", A(i, j));
      if (j > 0) out << ' ';
      out << buf;
    }
    out << '\n';
  }
}

void write_fixture_file(const std::string& path, const ColMatrix& A) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("fixture: cannot write " + path);
  write_fixture(out, A);
}

}  // namespace panella
