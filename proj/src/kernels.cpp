#include "panella/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace panella::kernel {

namespace {

constexpr int ps = kPanelSize;

// Accumulator block, column-major: v[c][r].
template <int MR>
struct Block {
  double v[kNr][MR] = {};
};

// ---------------------------------------------------------------------------
// gemm loops.  Fixed accumulation order: ascending kk, then c, then r.

template <int MR>
bool aligned_rows(ConstPanelPtr A, int valid) {
  return A.offset == 0 && (MR == ps || valid > ps);
}

template <int MR>
void row_pointers(ConstPanelPtr A, int valid, const double* (&rows)[MR]) {
  for (int r = 0; r < MR; ++r) rows[r] = &A.at(std::min(r, valid - 1), 0);
}

template <int MR>
void accumulate_nt(int k, ConstPanelPtr A, int a_rows, ConstPanelPtr B, int b_rows, Block<MR>& out) {
  if (k <= 0) return;
  // Local copy: the accumulator must not alias the operands to stay in registers.
  Block<MR> acc = out;
  struct WriteBack {
    Block<MR>& dst;
    Block<MR>& src;
    ~WriteBack() { dst = src; }
  } wb{out, acc};
  if (aligned_rows<MR>(A, a_rows) && B.offset == 0) {
    const double* a = A.base;
    const double* b = B.base;
    const std::ptrdiff_t next = static_cast<std::ptrdiff_t>(ps) * A.sd;
    for (int kk = 0; kk < k; ++kk, a += ps, b += ps) {
      for (int c = 0; c < kNr; ++c) {
        const double bc = b[c];
        for (int r = 0; r < MR; ++r) acc.v[c][r] += a[(r / ps) * next + r % ps] * bc;
      }
    }
    return;
  }
  const double* ar[MR];
  const double* br[kNr];
  row_pointers<MR>(A, a_rows, ar);
  row_pointers<kNr>(B, b_rows, br);
  for (int kk = 0; kk < k; ++kk) {
    const int off = kk * ps;
    for (int c = 0; c < kNr; ++c) {
      const double bc = br[c][off];
      for (int r = 0; r < MR; ++r) acc.v[c][r] += ar[r][off] * bc;
    }
  }
}

// B(kk, c) walker for the nn loops: B starts at an arbitrary row offset and
// crosses into the next panel every ps rows.
struct ColumnStream {
  const double* panel;
  int row;
  std::ptrdiff_t panel_step;
  int col[kNr];

  ColumnStream(ConstPanelPtr B, int b_cols)
      : panel(B.base), row(B.offset), panel_step(static_cast<std::ptrdiff_t>(ps) * B.sd) {
    for (int c = 0; c < kNr; ++c) col[c] = std::min(c, b_cols - 1) * ps;
  }
  const double* current() const { return panel + row; }
  void advance() {
    if (++row == ps) {
      row = 0;
      panel += panel_step;
    }
  }
};

// Adds sum over kk in [k0, k) of A(:, kk) * B(kk, :), where B(kk, c) is
// treated as zero for c > kk when `lower_top` (triangular top of B).
template <int MR, bool lower_top>
void accumulate_nn_range(int k, ConstPanelPtr A, int a_rows, ColumnStream& bs, Block<MR>& out) {
  if (k <= 0) return;
  Block<MR> acc = out;
  struct WriteBack {
    Block<MR>& dst;
    Block<MR>& src;
    ~WriteBack() { dst = src; }
  } wb{out, acc};
  auto step = [&](auto&& a_elem, int kk) {
    const double* brow = bs.current();
    const int cmax = lower_top ? std::min(kk, kNr - 1) : kNr - 1;
    for (int c = 0; c <= cmax; ++c) {
      const double bc = brow[bs.col[c]];
      for (int r = 0; r < MR; ++r) acc.v[c][r] += a_elem(r, kk) * bc;
    }
    bs.advance();
  };
  if (aligned_rows<MR>(A, a_rows)) {
    const double* a = A.base;
    const std::ptrdiff_t next = static_cast<std::ptrdiff_t>(ps) * A.sd;
    auto a_elem = [&](int r, int kk) { return a[kk * ps + (r / ps) * next + r % ps]; };
    for (int kk = 0; kk < k; ++kk) step(a_elem, kk);
    return;
  }
  const double* ar[MR];
  row_pointers<MR>(A, a_rows, ar);
  auto a_elem = [&](int r, int kk) { return ar[r][kk * ps]; };
  for (int kk = 0; kk < k; ++kk) step(a_elem, kk);
}

template <int MR>
void accumulate_nn(int k, ConstPanelPtr A, int a_rows, ConstPanelPtr B, int b_cols, Block<MR>& acc) {
  if (k <= 0) return;
  ColumnStream bs(B, b_cols);
  accumulate_nn_range<MR, false>(k, A, a_rows, bs, acc);
}

// ---------------------------------------------------------------------------
// Load / store.

template <int MR>
Block<MR> load_c(ConstPanelPtr C, const StoreSpec& s) {
  Block<MR> c;
  if (s.mode == StoreMode::Nominal && C.offset == 0) {
    const std::ptrdiff_t next = static_cast<std::ptrdiff_t>(ps) * C.sd;
    for (int j = 0; j < kNr; ++j)
      for (int r = 0; r < MR; ++r) c.v[j][r] = C.base[(r / ps) * next + j * ps + r % ps];
    return c;
  }
  for (int j = 0; j < s.n_store; ++j)
    for (int r = 0; r < s.m_store; ++r) c.v[j][r] = C.at(r, j);
  return c;
}

template <int MR>
void store(const Block<MR>& b, MutPanelPtr D, const StoreSpec& s, bool lower) {
  assert(s.valid_for(MR));
  assert(D.offset == s.panel_row_offset);
  if (s.mode == StoreMode::Nominal) {
    const std::ptrdiff_t next = static_cast<std::ptrdiff_t>(ps) * D.sd;
    for (int j = 0; j < kNr; ++j)
      for (int r = lower ? j : 0; r < MR; ++r) D.base[(r / ps) * next + j * ps + r % ps] = b.v[j][r];
    return;
  }
  const MutPanelPtr d{D.base, D.sd, s.panel_row_offset};
  for (int j = 0; j < s.n_store; ++j)
    for (int r = lower ? j : 0; r < s.m_store; ++r) d.at(r, j) = b.v[j][r];
}

template <int MR>
void scale_add(Block<MR>& acc, double alpha, ConstPanelPtr C, double beta, const StoreSpec& s) {
  if (beta == 0.0) {
    for (auto& col : acc.v)
      for (double& x : col) x = alpha * x;
    return;
  }
  const Block<MR> c = load_c<MR>(C, s);
  for (int j = 0; j < kNr; ++j)
    for (int r = 0; r < MR; ++r) acc.v[j][r] = alpha * acc.v[j][r] + beta * c.v[j][r];
}

// acc <- alpha * C - acc
template <int MR>
void subtract_from_c(Block<MR>& acc, double alpha, ConstPanelPtr C, const StoreSpec& s) {
  const Block<MR> c = load_c<MR>(C, s);
  for (int j = 0; j < kNr; ++j)
    for (int r = 0; r < MR; ++r) acc.v[j][r] = alpha * c.v[j][r] - acc.v[j][r];
}

// ---------------------------------------------------------------------------
// Register-resident factorization / substitution steps.

// Solves X * E^T = Y in place (E lower, 4 x 4), columns left to right.
template <int MR>
void solve_rl(Block<MR>& b, ConstPanelPtr E, const double* inv_diag, bool unit, int n_valid) {
  for (int c = 0; c < n_valid; ++c) {
    for (int l = 0; l < c; ++l) {
      const double e = E.at(c, l);
      for (int r = 0; r < MR; ++r) b.v[c][r] -= b.v[l][r] * e;
    }
    if (!unit) {
      const double inv = inv_diag[c];
      for (int r = 0; r < MR; ++r) b.v[c][r] *= inv;
    }
  }
}

// Solves X * E^T = Y in place (E upper, 4 x 4), columns right to left.
template <int MR>
void solve_ru(Block<MR>& b, ConstPanelPtr E, const double* inv_diag, int n_valid) {
  for (int c = n_valid - 1; c >= 0; --c) {
    for (int l = c + 1; l < n_valid; ++l) {
      const double e = E.at(c, l);
      for (int r = 0; r < MR; ++r) b.v[c][r] -= b.v[l][r] * e;
    }
    const double inv = inv_diag[c];
    for (int r = 0; r < MR; ++r) b.v[c][r] *= inv;
  }
}

// Solves E * X = Y in place, E unit lower MR x MR.
template <int MR>
void solve_ll_one(Block<MR>& b, ConstPanelPtr E, int m_valid) {
  for (int r = 1; r < m_valid; ++r) {
    for (int l = 0; l < r; ++l) {
      const double e = E.at(r, l);
      for (int c = 0; c < kNr; ++c) b.v[c][r] -= e * b.v[c][l];
    }
  }
}

// Solves E * X = Y in place, E upper MR x MR, rows bottom to top.
template <int MR>
void solve_lu(Block<MR>& b, ConstPanelPtr E, const double* inv_diag, int m_valid) {
  for (int r = m_valid - 1; r >= 0; --r) {
    for (int l = r + 1; l < m_valid; ++l) {
      const double e = E.at(r, l);
      for (int c = 0; c < kNr; ++c) b.v[c][r] -= e * b.v[c][l];
    }
    const double inv = inv_diag[r];
    for (int c = 0; c < kNr; ++c) b.v[c][r] *= inv;
  }
}

// Cholesky of the top 4 x 4 lower triangle, rows below solved along.
template <int MR>
int factor_l(Block<MR>& b, double* inv_diag, int m_valid, int n_valid) {
  int failed = -1;
  for (int c = 0; c < kNr; ++c) {
    const double pivot = b.v[c][c];
    double d = 0.0;
    double inv = 0.0;
    if (pivot > 0.0) {
      d = std::sqrt(pivot);
      inv = 1.0 / d;
    } else if (failed < 0 && c < n_valid && c < m_valid) {
      failed = c;
    }
    b.v[c][c] = d;
    if (c < n_valid) inv_diag[c] = inv;
    for (int r = c + 1; r < MR; ++r) b.v[c][r] *= inv;
    for (int c2 = c + 1; c2 < kNr; ++c2) {
      const double f = b.v[c][c2];
      for (int r = c2; r < MR; ++r) b.v[c2][r] -= b.v[c][r] * f;
    }
  }
  return failed;
}

bool empty(const StoreSpec& s) { return s.m_store == 0 || s.n_store == 0; }

}  // namespace

template <int MR>
void gemm_nt(int k, double alpha, ConstPanelPtr A, ConstPanelPtr B, double beta, ConstPanelPtr C,
             MutPanelPtr D, const StoreSpec& spec) {
  if (empty(spec)) return;
  Block<MR> acc;
  accumulate_nt<MR>(k, A, spec.m_store, B, spec.n_store, acc);
  scale_add<MR>(acc, alpha, C, beta, spec);
  store<MR>(acc, D, spec, false);
}

template <int MR>
void gemm_nn(int k, double alpha, ConstPanelPtr A, ConstPanelPtr B, double beta, ConstPanelPtr C,
             MutPanelPtr D, const StoreSpec& spec) {
  if (empty(spec)) return;
  Block<MR> acc;
  accumulate_nn<MR>(k, A, spec.m_store, B, spec.n_store, acc);
  scale_add<MR>(acc, alpha, C, beta, spec);
  store<MR>(acc, D, spec, false);
}

template <int MR>
void syrk_nt_l(int k, double alpha, ConstPanelPtr A, ConstPanelPtr B, double beta, ConstPanelPtr C,
               MutPanelPtr D, const StoreSpec& spec) {
  if (empty(spec)) return;
  Block<MR> acc;
  accumulate_nt<MR>(k, A, spec.m_store, B, spec.n_store, acc);
  scale_add<MR>(acc, alpha, C, beta, spec);
  store<MR>(acc, D, spec, true);
}

template <int MR>
void trsm_nt_rl(int k, ConstPanelPtr A, ConstPanelPtr B, double alpha, ConstPanelPtr C, MutPanelPtr D,
                ConstPanelPtr E, const double* inv_diag, bool unit, const StoreSpec& spec) {
  if (empty(spec)) return;
  Block<MR> acc;
  accumulate_nt<MR>(k, A, spec.m_store, B, spec.n_store, acc);
  subtract_from_c<MR>(acc, alpha, C, spec);
  solve_rl<MR>(acc, E, inv_diag, unit, spec.n_store);
  store<MR>(acc, D, spec, false);
}

template <int MR>
void trsm_nt_ru(int k, ConstPanelPtr A, ConstPanelPtr B, double alpha, ConstPanelPtr C, MutPanelPtr D,
                ConstPanelPtr E, const double* inv_diag, const StoreSpec& spec) {
  if (empty(spec)) return;
  Block<MR> acc;
  accumulate_nt<MR>(k, A, spec.m_store, B, spec.n_store, acc);
  subtract_from_c<MR>(acc, alpha, C, spec);
  solve_ru<MR>(acc, E, inv_diag, spec.n_store);
  store<MR>(acc, D, spec, false);
}

template <int MR>
void trsm_nn_ll_one(int k, ConstPanelPtr A, ConstPanelPtr B, double alpha, ConstPanelPtr C, MutPanelPtr D,
                    ConstPanelPtr E, const StoreSpec& spec) {
  if (empty(spec)) return;
  Block<MR> acc;
  accumulate_nn<MR>(k, A, spec.m_store, B, spec.n_store, acc);
  subtract_from_c<MR>(acc, alpha, C, spec);
  solve_ll_one<MR>(acc, E, spec.m_store);
  store<MR>(acc, D, spec, false);
}

template <int MR>
void trsm_nn_lu(int k, ConstPanelPtr A, ConstPanelPtr B, double alpha, ConstPanelPtr C, MutPanelPtr D,
                ConstPanelPtr E, const double* inv_diag, const StoreSpec& spec) {
  if (empty(spec)) return;
  Block<MR> acc;
  accumulate_nn<MR>(k, A, spec.m_store, B, spec.n_store, acc);
  subtract_from_c<MR>(acc, alpha, C, spec);
  solve_lu<MR>(acc, E, inv_diag, spec.m_store);
  store<MR>(acc, D, spec, false);
}

template <int MR>
int potrf_nt_l(int k, ConstPanelPtr A, ConstPanelPtr B, ConstPanelPtr C, MutPanelPtr D, double* inv_diag,
               const StoreSpec& spec) {
  if (empty(spec)) return -1;
  Block<MR> acc;
  accumulate_nt<MR>(k, A, spec.m_store, B, spec.n_store, acc);
  subtract_from_c<MR>(acc, 1.0, C, spec);
  const int failed = factor_l<MR>(acc, inv_diag, spec.m_store, spec.n_store);
  store<MR>(acc, D, spec, true);
  return failed;
}

template <int MR>
int syrk_potrf_nt_l(int kp, ConstPanelPtr Ap, ConstPanelPtr Bp, int km, ConstPanelPtr Am, ConstPanelPtr Bm,
                    ConstPanelPtr C, MutPanelPtr D, double* inv_diag, const StoreSpec& spec) {
  if (empty(spec)) return -1;
  Block<MR> acc;
  accumulate_nt<MR>(kp, Ap, spec.m_store, Bp, spec.n_store, acc);
  scale_add<MR>(acc, 1.0, C, 1.0, spec);
  Block<MR> down;
  accumulate_nt<MR>(km, Am, spec.m_store, Bm, spec.n_store, down);
  for (int j = 0; j < kNr; ++j)
    for (int r = 0; r < MR; ++r) acc.v[j][r] = acc.v[j][r] - down.v[j][r];
  const int failed = factor_l<MR>(acc, inv_diag, spec.m_store, spec.n_store);
  store<MR>(acc, D, spec, true);
  return failed;
}

template <int MR>
void gemm_trsm_nt_rl(int kp, ConstPanelPtr Ap, ConstPanelPtr Bp, int km, ConstPanelPtr Am, ConstPanelPtr Bm,
                     ConstPanelPtr C, MutPanelPtr D, ConstPanelPtr E, const double* inv_diag,
                     const StoreSpec& spec) {
  if (empty(spec)) return;
  Block<MR> acc;
  accumulate_nt<MR>(kp, Ap, spec.m_store, Bp, spec.n_store, acc);
  scale_add<MR>(acc, 1.0, C, 1.0, spec);
  Block<MR> down;
  accumulate_nt<MR>(km, Am, spec.m_store, Bm, spec.n_store, down);
  for (int j = 0; j < kNr; ++j)
    for (int r = 0; r < MR; ++r) acc.v[j][r] = acc.v[j][r] - down.v[j][r];
  solve_rl<MR>(acc, E, inv_diag, false, spec.n_store);
  store<MR>(acc, D, spec, false);
}

template <int MR>
void trmm_nn_rl(int k, double alpha, ConstPanelPtr A, ConstPanelPtr B, MutPanelPtr D, const StoreSpec& spec) {
  if (empty(spec)) return;
  Block<MR> acc;
  if (k > 0) {
    ColumnStream bs(B, spec.n_store);
    const int top = std::min(k, kNr);
    accumulate_nn_range<MR, true>(top, A, spec.m_store, bs, acc);
    accumulate_nn_range<MR, false>(k - top, A.shifted(0, top), spec.m_store, bs, acc);
  }
  for (auto& col : acc.v)
    for (double& x : col) x = alpha * x;
  store<MR>(acc, D, spec, false);
}

#define PANELLA_INSTANTIATE(MR)                                                                              \
  template void gemm_nt<MR>(int, double, ConstPanelPtr, ConstPanelPtr, double, ConstPanelPtr, MutPanelPtr,    \
                            const StoreSpec&);                                                                \
  template void gemm_nn<MR>(int, double, ConstPanelPtr, ConstPanelPtr, double, ConstPanelPtr, MutPanelPtr,    \
                            const StoreSpec&);                                                                \
  template void syrk_nt_l<MR>(int, double, ConstPanelPtr, ConstPanelPtr, double, ConstPanelPtr, MutPanelPtr,  \
                              const StoreSpec&);                                                              \
  template void trsm_nt_rl<MR>(int, ConstPanelPtr, ConstPanelPtr, double, ConstPanelPtr, MutPanelPtr,         \
                               ConstPanelPtr, const double*, bool, const StoreSpec&);                         \
  template void trsm_nt_ru<MR>(int, ConstPanelPtr, ConstPanelPtr, double, ConstPanelPtr, MutPanelPtr,         \
                               ConstPanelPtr, const double*, const StoreSpec&);                               \
  template void trsm_nn_ll_one<MR>(int, ConstPanelPtr, ConstPanelPtr, double, ConstPanelPtr, MutPanelPtr,     \
                                   ConstPanelPtr, const StoreSpec&);                                          \
  template void trsm_nn_lu<MR>(int, ConstPanelPtr, ConstPanelPtr, double, ConstPanelPtr, MutPanelPtr,         \
                               ConstPanelPtr, const double*, const StoreSpec&);                               \
  template int potrf_nt_l<MR>(int, ConstPanelPtr, ConstPanelPtr, ConstPanelPtr, MutPanelPtr, double*,         \
                              const StoreSpec&);                                                              \
  template int syrk_potrf_nt_l<MR>(int, ConstPanelPtr, ConstPanelPtr, int, ConstPanelPtr, ConstPanelPtr,      \
                                   ConstPanelPtr, MutPanelPtr, double*, const StoreSpec&);                    \
  template void gemm_trsm_nt_rl<MR>(int, ConstPanelPtr, ConstPanelPtr, int, ConstPanelPtr, ConstPanelPtr,     \
                                    ConstPanelPtr, MutPanelPtr, ConstPanelPtr, const double*,                 \
                                    const StoreSpec&);                                                        \
  template void trmm_nn_rl<MR>(int, double, ConstPanelPtr, ConstPanelPtr, MutPanelPtr, const StoreSpec&);

PANELLA_INSTANTIATE(4)
PANELLA_INSTANTIATE(8)

#undef PANELLA_INSTANTIATE

}  // namespace panella::kernel
