#pragma once

// Generators and comparison helpers shared by the test binaries.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <random>
#include <vector>

#include "panella/matstore.hpp"
#include "panella/oracle.hpp"
#include "panella/pack.hpp"

namespace panella::test {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo = -1.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}
inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline ColMatrix random_matrix(Rng& rng, int m, int n) {
  ColMatrix A(m, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < m; ++i) A(i, j) = uniform(rng);
  return A;
}

// M M^T + n I
inline ColMatrix random_spd(Rng& rng, int n) {
  const ColMatrix M = random_matrix(rng, n, n);
  ColMatrix S = oracle::gemm_nt(1.0, M, M, 0.0, {});
  for (int i = 0; i < n; ++i) S(i, i) += n;
  return S;
}

// Full random matrix whose diagonal dominates; triangular routines read
// only their triangle, so the other one stays as noise.
inline ColMatrix random_dominant(Rng& rng, int n) {
  ColMatrix A = random_matrix(rng, n, n);
  for (int i = 0; i < n; ++i) A(i, i) = (uniform(rng) < 0 ? -1.0 : 1.0) * (n + 1.0 + uniform(rng, 0.0, 1.0));
  return A;
}

inline ColMatrix lower(const ColMatrix& A, bool unit = false) {
  ColMatrix L(A.rows(), A.cols());
  for (int j = 0; j < A.cols(); ++j)
    for (int i = j; i < A.rows(); ++i) L(i, j) = (unit && i == j) ? 1.0 : A(i, j);
  return L;
}

inline ColMatrix upper(const ColMatrix& A) {
  ColMatrix U(A.rows(), A.cols());
  for (int j = 0; j < A.cols(); ++j)
    for (int i = 0; i <= std::min(j, A.rows() - 1); ++i) U(i, j) = A(i, j);
  return U;
}

inline std::vector<double> random_vector(Rng& rng, int m) {
  std::vector<double> v(static_cast<std::size_t>(m));
  for (double& x : v) x = uniform(rng);
  return v;
}

inline DenseVector to_vector(const std::vector<double>& v) {
  DenseVector x = allocate_vector(static_cast<int>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) x[static_cast<int>(i)] = v[i];
  return x;
}

inline std::vector<double> from_vector(const DenseVector& x, int first = 0, int m = -1) {
  if (m < 0) m = x.size() - first;
  return {x.data() + first, x.data() + first + m};
}

inline double max_rel(const std::vector<double>& a, const std::vector<double>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (std::isnan(a[i])) return INFINITY;
    num = std::max(num, std::fabs(a[i] - b[i]));
    den = std::max(den, std::fabs(b[i]));
  }
  return den > 0.0 ? num / den : num;
}

inline ColMatrix sub(const ColMatrix& A, int m, int n) {
  ColMatrix S(m, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < m; ++i) S(i, j) = A(i, j);
  return S;
}

// Lower Cholesky of the top n x n of X (m x n), rows below solved along.
inline ColMatrix chol_block(const ColMatrix& X) {
  const int m = X.rows(), n = X.cols();
  const ColMatrix L11 = oracle::potrf(sub(X, n, n)).L;
  ColMatrix L(m, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) L(i, j) = L11(i, j);
  if (m > n) {
    ColMatrix X21(m - n, n);
    for (int j = 0; j < n; ++j)
      for (int i = n; i < m; ++i) X21(i - n, j) = X(i, j);
    const ColMatrix L21 = oracle::trsm("rltn", 1.0, L11, X21);
    for (int j = 0; j < n; ++j)
      for (int i = n; i < m; ++i) L(i, j) = L21(i - n, j);
  }
  return L;
}

/// A panel operand placed at (ai, aj) inside a larger matrix filled with
/// noise, so that out-of-window reads and writes show up.
struct Embedded {
  PanelMatrix M;
  int ai = 0;
  int aj = 0;

  PanelRef ref() { return {M, ai, aj}; }
  PanelCRef cref() const { return {M, ai, aj}; }
};

inline Embedded embed(Rng& rng, const ColMatrix& A, int ai, int aj, int pad = 3) {
  Embedded e{allocate_panel_matrix(ai + A.rows() + pad, aj + A.cols() + pad), ai, aj};
  for (int j = 0; j < e.M.cols(); ++j)
    for (int i = 0; i < e.M.rows(); ++i) e.M(i, j) = 100.0 + uniform(rng);
  for (int j = 0; j < A.cols(); ++j)
    for (int i = 0; i < A.rows(); ++i) e.M(ai + i, aj + j) = A(i, j);
  return e;
}

inline ColMatrix window(const PanelMatrix& M, int ai, int aj, int m, int n) {
  ColMatrix A(m, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < m; ++i) A(i, j) = M(ai + i, aj + j);
  return A;
}
inline ColMatrix window(const Embedded& e, int m, int n) { return window(e.M, e.ai, e.aj, m, n); }

/// True when every element of `after` outside the window equals `before`
/// bit for bit.
inline bool outside_unchanged(const PanelMatrix& before, const PanelMatrix& after, int ai, int aj, int m, int n) {
  for (int j = 0; j < before.cols(); ++j)
    for (int i = 0; i < before.rows(); ++i) {
      const bool inside = i >= ai && i < ai + m && j >= aj && j < aj + n;
      if (!inside && std::bit_cast<std::uint64_t>(before(i, j)) != std::bit_cast<std::uint64_t>(after(i, j)))
        return false;
    }
  return true;
}

inline PanelMatrix deep_copy(const PanelMatrix& A) {
  PanelMatrix B = allocate_panel_matrix(A.rows(), A.cols());
  gecp(A.rows(), A.cols(), A, B);
  return B;
}

/// Scratch area aligned like panel storage.
struct Workspace {
  std::vector<std::byte> buf;
  std::span<std::byte> area;
};

inline Workspace aligned_work(std::size_t bytes) {
  Workspace w{std::vector<std::byte>(bytes + kAlignment), {}};
  void* p = w.buf.data();
  std::size_t space = w.buf.size();
  std::align(kAlignment, bytes, p, space);
  w.area = {static_cast<std::byte*>(p), bytes};
  return w;
}

inline bool bit_equal(const ColMatrix& A, const ColMatrix& B) {
  if (A.rows() != B.rows() || A.cols() != B.cols()) return false;
  for (int j = 0; j < A.cols(); ++j)
    for (int i = 0; i < A.rows(); ++i)
      if (std::bit_cast<std::uint64_t>(A(i, j)) != std::bit_cast<std::uint64_t>(B(i, j))) return false;
  return true;
}

}  // namespace panella::test
