#include "panella/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace panella::oracle {

ColMatrix transpose(const ColMatrix& A) {
  ColMatrix T(A.cols(), A.rows());
  for (int j = 0; j < A.cols(); ++j)
    for (int i = 0; i < A.rows(); ++i) T(j, i) = A(i, j);
  return T;
}

namespace {

// alpha * op(A) * op(B) + beta * C, plain triple loop, k innermost.
ColMatrix product(double alpha, const ColMatrix& A, bool ta, const ColMatrix& B, bool tb, double beta,
                  const ColMatrix& C) {
  const int m = ta ? A.cols() : A.rows();
  const int k = ta ? A.rows() : A.cols();
  const int n = tb ? B.rows() : B.cols();
  if ((tb ? B.cols() : B.rows()) != k) throw std::invalid_argument("oracle: inner dimensions differ");
  ColMatrix D(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int l = 0; l < k; ++l) s += (ta ? A(l, i) : A(i, l)) * (tb ? B(j, l) : B(l, j));
      D(i, j) = beta == 0.0 ? alpha * s : alpha * s + beta * C(i, j);
    }
  return D;
}

}  // namespace

ColMatrix gemm_nn(double alpha, const ColMatrix& A, const ColMatrix& B, double beta, const ColMatrix& C) {
  return product(alpha, A, false, B, false, beta, C);
}

ColMatrix gemm_nt(double alpha, const ColMatrix& A, const ColMatrix& B, double beta, const ColMatrix& C) {
  return product(alpha, A, false, B, true, beta, C);
}

ColMatrix syrk_ln(double alpha, const ColMatrix& A, const ColMatrix& B, double beta, const ColMatrix& C) {
  ColMatrix D = product(alpha, A, false, B, true, beta, C);
  for (int j = 1; j < D.cols(); ++j)
    for (int i = 0; i < j && i < D.rows(); ++i) D(i, j) = 0.0;
  return D;
}

ColMatrix trmm_rlnn(double alpha, const ColMatrix& A, const ColMatrix& B) {
  ColMatrix L(A.rows(), A.cols());
  for (int j = 0; j < A.cols(); ++j)
    for (int i = j; i < A.rows(); ++i) L(i, j) = A(i, j);
  return product(alpha, B, false, L, false, 0.0, {});
}

ColMatrix trsm(const char* variant, double alpha, const ColMatrix& A, const ColMatrix& B) {
  const std::string v(variant);
  const int m = B.rows();
  const int n = B.cols();
  ColMatrix X(m, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < m; ++i) X(i, j) = alpha * B(i, j);
  if (v == "llnu" || v == "lunn") {
    // Column by column substitution on A X = alpha B.
    const bool lower = v == "llnu";
    for (int j = 0; j < n; ++j) {
      if (lower) {
        for (int i = 0; i < m; ++i)
          for (int l = 0; l < i; ++l) X(i, j) -= A(i, l) * X(l, j);
      } else {
        for (int i = m - 1; i >= 0; --i) {
          for (int l = i + 1; l < m; ++l) X(i, j) -= A(i, l) * X(l, j);
          X(i, j) /= A(i, i);
        }
      }
    }
    return X;
  }
  // X op(A)^T = alpha B  <=>  A X^T = alpha B^T for each row of X.
  const bool lower = v == "rltn" || v == "rltu";
  const bool unit = v == "rltu";
  if (!lower && v != "rutn") throw std::invalid_argument("oracle::trsm: unknown variant " + v);
  for (int i = 0; i < m; ++i) {
    if (lower) {
      for (int j = 0; j < n; ++j) {
        for (int l = 0; l < j; ++l) X(i, j) -= X(i, l) * A(j, l);
        if (!unit) X(i, j) /= A(j, j);
      }
    } else {
      for (int j = n - 1; j >= 0; --j) {
        for (int l = j + 1; l < n; ++l) X(i, j) -= X(i, l) * A(j, l);
        X(i, j) /= A(j, j);
      }
    }
  }
  return X;
}

Cholesky potrf(const ColMatrix& C) {
  const int n = C.rows();
  Cholesky out{ColMatrix(n, n), -1};
  ColMatrix& L = out.L;
  for (int j = 0; j < n; ++j)
    for (int i = j; i < n; ++i) L(i, j) = C(i, j);
  for (int j = 0; j < n; ++j) {
    if (!(L(j, j) > 0.0)) {
      out.failed = j;
      return out;
    }
    L(j, j) = std::sqrt(L(j, j));
    for (int i = j + 1; i < n; ++i) L(i, j) /= L(j, j);
    for (int c = j + 1; c < n; ++c)
      for (int i = c; i < n; ++i) L(i, c) -= L(i, j) * L(c, j);
  }
  return out;
}

Lu getrf(const ColMatrix& C, bool pivot) {
  const int m = C.rows();
  const int n = C.cols();
  const int kmin = std::min(m, n);
  Lu out{C, std::vector<int>(static_cast<std::size_t>(kmin)), -1};
  ColMatrix& A = out.LU;
  for (int k = 0; k < kmin; ++k) {
    int p = k;
    if (pivot) {
      for (int i = k + 1; i < m; ++i)
        if (std::fabs(A(i, k)) > std::fabs(A(p, k))) p = i;
      if (p != k)
        for (int j = 0; j < n; ++j) std::swap(A(k, j), A(p, j));
    }
    out.ipiv[static_cast<std::size_t>(k)] = p;
    if (A(k, k) == 0.0) {
      out.failed = k;
      return out;
    }
    for (int i = k + 1; i < m; ++i) A(i, k) /= A(k, k);
    for (int j = k + 1; j < n; ++j)
      for (int i = k + 1; i < m; ++i) A(i, j) -= A(i, k) * A(k, j);
  }
  return out;
}

ColMatrix lq_l(const ColMatrix& C) {
  const ColMatrix G = product(1.0, C, false, C, true, 0.0, {});
  Cholesky ch = potrf(G);
  if (ch.failed >= 0) throw std::runtime_error("oracle::lq_l: rows of C are not independent");
  return ch.L;
}

namespace {

std::vector<double> combine(double alpha, const std::vector<double>& s, double beta, const std::vector<double>& y) {
  std::vector<double> z(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) z[i] = beta == 0.0 ? alpha * s[i] : alpha * s[i] + beta * y[i];
  return z;
}

}  // namespace

std::vector<double> gemv_n(double alpha, const ColMatrix& A, const std::vector<double>& x, double beta,
                           const std::vector<double>& y) {
  std::vector<double> s(static_cast<std::size_t>(A.rows()), 0.0);
  for (int i = 0; i < A.rows(); ++i)
    for (int j = 0; j < A.cols(); ++j) s[i] += A(i, j) * x[j];
  return combine(alpha, s, beta, y);
}

std::vector<double> gemv_t(double alpha, const ColMatrix& A, const std::vector<double>& x, double beta,
                           const std::vector<double>& y) {
  std::vector<double> s(static_cast<std::size_t>(A.cols()), 0.0);
  for (int j = 0; j < A.cols(); ++j)
    for (int i = 0; i < A.rows(); ++i) s[j] += A(i, j) * x[i];
  return combine(alpha, s, beta, y);
}

std::vector<double> symv_l(double alpha, const ColMatrix& A, const std::vector<double>& x, double beta,
                           const std::vector<double>& y) {
  const int m = A.rows();
  ColMatrix S(m, m);
  for (int j = 0; j < m; ++j)
    for (int i = j; i < m; ++i) S(i, j) = S(j, i) = A(i, j);
  return gemv_n(alpha, S, x, beta, y);
}

namespace {

// Explicit op(A) for a triangular variant, with the unit diagonal applied.
ColMatrix triangle(const std::string& v, const ColMatrix& A) {
  const int m = A.rows();
  const bool lower = v[0] == 'l';
  const bool trans = v[1] == 't';
  const bool unit = v[2] == 'u';
  ColMatrix T(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const bool in = lower ? i >= j : i <= j;
      if (!in) continue;
      const double a = (i == j && unit) ? 1.0 : A(i, j);
      if (trans)
        T(j, i) = a;
      else
        T(i, j) = a;
    }
  return T;
}

}  // namespace

std::vector<double> trmv(const char* variant, const ColMatrix& A, const std::vector<double>& x) {
  return gemv_n(1.0, triangle(variant, A), x, 0.0, {});
}

std::vector<double> trsv(const char* variant, const ColMatrix& A, const std::vector<double>& x) {
  ColMatrix b(static_cast<int>(x.size()), 1);
  for (std::size_t i = 0; i < x.size(); ++i) b(static_cast<int>(i), 0) = x[i];
  const ColMatrix s = solve(triangle(variant, A), b);
  std::vector<double> z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = s(static_cast<int>(i), 0);
  return z;
}

double dot(const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

ColMatrix solve(const ColMatrix& A, const ColMatrix& B) {
  const int n = A.rows();
  ColMatrix M = A;
  ColMatrix X = B;
  for (int k = 0; k < n; ++k) {
    int p = k;
    for (int i = k + 1; i < n; ++i)
      if (std::fabs(M(i, k)) > std::fabs(M(p, k))) p = i;
    if (M(p, k) == 0.0) throw std::runtime_error("oracle::solve: singular matrix");
    if (p != k) {
      for (int j = 0; j < n; ++j) std::swap(M(k, j), M(p, j));
      for (int j = 0; j < X.cols(); ++j) std::swap(X(k, j), X(p, j));
    }
    for (int i = k + 1; i < n; ++i) {
      const double f = M(i, k) / M(k, k);
      for (int j = k; j < n; ++j) M(i, j) -= f * M(k, j);
      for (int j = 0; j < X.cols(); ++j) X(i, j) -= f * X(k, j);
    }
  }
  for (int j = 0; j < X.cols(); ++j)
    for (int i = n - 1; i >= 0; --i) {
      double s = X(i, j);
      for (int l = i + 1; l < n; ++l) s -= M(i, l) * X(l, j);
      X(i, j) = s / M(i, i);
    }
  return X;
}

ColMatrix riccati_step(const ColMatrix& A, const ColMatrix& B, const ColMatrix& Q, const ColMatrix& R,
                       const ColMatrix& S, const ColMatrix& P) {
  const ColMatrix PA = product(1.0, P, false, A, false, 0.0, {});
  const ColMatrix PB = product(1.0, P, false, B, false, 0.0, {});
  const ColMatrix G = product(1.0, B, true, PB, false, 1.0, R);          // R + B^T P B
  const ColMatrix K = product(1.0, B, true, PA, false, 1.0, S);          // S + B^T P A
  const ColMatrix AtPA = product(1.0, A, true, PA, false, 1.0, Q);       // Q + A^T P A
  const ColMatrix GK = solve(G, K);
  return product(-1.0, K, true, GK, false, 1.0, AtPA);
}

ColMatrix add(const ColMatrix& A, const ColMatrix& B, double beta) {
  ColMatrix D(A.rows(), A.cols());
  for (int j = 0; j < A.cols(); ++j)
    for (int i = 0; i < A.rows(); ++i) D(i, j) = A(i, j) + beta * B(i, j);
  return D;
}

double norm_fro(const ColMatrix& A) {
  double s = 0.0;
  for (int j = 0; j < A.cols(); ++j)
    for (int i = 0; i < A.rows(); ++i) s += A(i, j) * A(i, j);
  return std::sqrt(s);
}

double diff_fro(const ColMatrix& A, const ColMatrix& B) { return norm_fro(add(A, B, -1.0)); }

double max_rel_diff(const ColMatrix& A, const ColMatrix& B) {
  double diff = 0.0;
  double scale = 0.0;
  for (int j = 0; j < B.cols(); ++j)
    for (int i = 0; i < B.rows(); ++i) {
      const double d = std::fabs(A(i, j) - B(i, j));
      if (std::isnan(d)) return std::numeric_limits<double>::infinity();
      diff = std::max(diff, d);
      scale = std::max(scale, std::fabs(B(i, j)));
    }
  return scale > 0.0 ? diff / scale : diff;
}

}  // namespace panella::oracle
