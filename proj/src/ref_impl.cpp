#include "panella/ref_impl.hpp"

#include <cmath>
#include <cstddef>

namespace panella {

namespace {

struct Col {
  const double* p;
  std::ptrdiff_t ld;
  double operator()(int i, int j) const { return p[i + j * ld]; }
};

struct MutCol {
  double* p;
  std::ptrdiff_t ld;
  double& operator()(int i, int j) const { return p[i + j * ld]; }
};

Col view(ColCRef A) {
  return {A->data() + A.i + static_cast<std::ptrdiff_t>(A.j) * A->leading_dimension(), A->leading_dimension()};
}
MutCol view(ColRef A) { return {&(*A.mat)(A.i, A.j), A->leading_dimension()}; }

// MI x NJ block of sum_kk A(i+r, kk) * op(B)(kk, j+q); all four scalars of a
// full 2 x 2 block stay in locals across the k loop.
template <int MI, int NJ, bool TransB>
void block(int i, int j, int k, Col a, Col b, double (&acc)[NJ][MI]) {
  for (int kk = 0; kk < k; ++kk) {
    double av[MI];
    for (int r = 0; r < MI; ++r) av[r] = a(i + r, kk);
    for (int q = 0; q < NJ; ++q) {
      const double bv = TransB ? b(j + q, kk) : b(kk, j + q);
      for (int r = 0; r < MI; ++r) acc[q][r] += av[r] * bv;
    }
  }
}

template <int MI, int NJ, bool TransB>
void gemm_block(int i, int j, int k, double alpha, Col a, Col b, double beta, Col c, MutCol d) {
  double acc[NJ][MI] = {};
  block<MI, NJ, TransB>(i, j, k, a, b, acc);
  for (int q = 0; q < NJ; ++q)
    for (int r = 0; r < MI; ++r)
      d(i + r, j + q) = beta == 0.0 ? alpha * acc[q][r] : alpha * acc[q][r] + beta * c(i + r, j + q);
}

template <bool TransB>
void gemm(int m, int n, int k, double alpha, Col a, Col b, double beta, Col c, MutCol d) {
  int j = 0;
  for (; j + 1 < n; j += 2) {
    int i = 0;
    for (; i + 1 < m; i += 2) gemm_block<2, 2, TransB>(i, j, k, alpha, a, b, beta, c, d);
    if (i < m) gemm_block<1, 2, TransB>(i, j, k, alpha, a, b, beta, c, d);
  }
  if (j < n) {
    int i = 0;
    for (; i + 1 < m; i += 2) gemm_block<2, 1, TransB>(i, j, k, alpha, a, b, beta, c, d);
    if (i < m) gemm_block<1, 1, TransB>(i, j, k, alpha, a, b, beta, c, d);
  }
}

void check_col(ColCRef A, int m, int n, const char* what) { check_window(A, m, n, what); }

// One 2-column step of the left-looking Cholesky: rows i .. i+MI-1 of
// columns j .. j+NJ-1, updated with the finished columns 0 .. j-1.
template <int MI, int NJ>
void chol_block(int i, int j, Col c, MutCol d, double (&acc)[NJ][MI]) {
  const Col l{d.p, d.ld};
  for (int q = 0; q < NJ; ++q)
    for (int r = 0; r < MI; ++r) acc[q][r] = 0.0;
  block<MI, NJ, true>(i, j, j, l, l, acc);
  for (int q = 0; q < NJ; ++q)
    for (int r = 0; r < MI; ++r) acc[q][r] = c(i + r, j + q) - acc[q][r];
}

template <int NJ>
bool factor_diag(int j, Col c, MutCol d, double (&inv)[2]) {
  double acc[NJ][NJ];
  chol_block<NJ, NJ>(j, j, c, d, acc);
  if (!(acc[0][0] > 0.0)) return false;
  const double l00 = std::sqrt(acc[0][0]);
  inv[0] = 1.0 / l00;
  d(j, j) = l00;
  if constexpr (NJ == 2) {
    const double l10 = acc[0][1] * inv[0];
    const double p = acc[1][1] - l10 * l10;
    d(j + 1, j) = l10;
    if (!(p > 0.0)) return false;
    const double l11 = std::sqrt(p);
    inv[1] = 1.0 / l11;
    d(j + 1, j + 1) = l11;
  }
  return true;
}

template <int MI, int NJ>
void solve_below(int i, int j, Col c, MutCol d, const double (&inv)[2]) {
  double acc[NJ][MI];
  chol_block<MI, NJ>(i, j, c, d, acc);
  for (int r = 0; r < MI; ++r) {
    const double x0 = acc[0][r] * inv[0];
    d(i + r, j) = x0;
    if constexpr (NJ == 2) d(i + r, j + 1) = (acc[1][r] - x0 * d(j + 1, j)) * inv[1];
  }
}

}  // namespace

void rf_gemm_nn(int m, int n, int k, double alpha, ColCRef A, ColCRef B, double beta, ColCRef C, ColRef D) {
  check_col(A, m, k, "rf_gemm_nn: A");
  check_col(B, k, n, "rf_gemm_nn: B");
  check_col(C, m, n, "rf_gemm_nn: C");
  check_col(D, m, n, "rf_gemm_nn: D");
  if (m == 0 || n == 0) return;
  gemm<false>(m, n, k, alpha, view(A), view(B), beta, view(C), view(D));
}

void rf_gemm_nt(int m, int n, int k, double alpha, ColCRef A, ColCRef B, double beta, ColCRef C, ColRef D) {
  check_col(A, m, k, "rf_gemm_nt: A");
  check_col(B, n, k, "rf_gemm_nt: B");
  check_col(C, m, n, "rf_gemm_nt: C");
  check_col(D, m, n, "rf_gemm_nt: D");
  if (m == 0 || n == 0) return;
  gemm<true>(m, n, k, alpha, view(A), view(B), beta, view(C), view(D));
}

FactorStatus rf_potrf_l(int m, ColCRef C, ColRef D) {
  check_col(C, m, m, "rf_potrf_l: C");
  check_col(D, m, m, "rf_potrf_l: D");
  const Col c = view(C);
  const MutCol d = view(D);
  for (int j = 0; j < m; j += 2) {
    double inv[2] = {0.0, 0.0};
    const bool two = j + 1 < m;
    const bool ok = two ? factor_diag<2>(j, c, d, inv) : factor_diag<1>(j, c, d, inv);
    if (!ok) {
      const bool first = !(inv[0] > 0.0);
      return FactorStatus::failure(first ? j : j + 1);
    }
    int i = j + (two ? 2 : 1);
    if (two) {
      for (; i + 1 < m; i += 2) solve_below<2, 2>(i, j, c, d, inv);
      if (i < m) solve_below<1, 2>(i, j, c, d, inv);
    } else {
      for (; i + 1 < m; i += 2) solve_below<2, 1>(i, j, c, d, inv);
      if (i < m) solve_below<1, 1>(i, j, c, d, inv);
    }
  }
  return FactorStatus::success();
}

}  // namespace panella
