#include <algorithm>
#include <cmath>
#include <vector>

#include "panella/level3.hpp"
#include "panella/pack.hpp"
#include "tiling.hpp"

namespace panella {

using detail::for_row_tiles;
using detail::tile_spec;

namespace {

constexpr int ps = kPanelSize;

bool same_window(PanelCRef a, PanelCRef b) { return a.mat == b.mat && a.i == b.i && a.j == b.j; }

// Left-looking Cholesky over row tiles, shared by potrf_l(_mn) (k == 0,
// plain trsm/potrf kernels) and syrk_potrf_ln(_mn) (fused kernels).
FactorStatus cholesky_sweep(int m, int n, int k, PanelCRef A, PanelCRef B, PanelCRef C, PanelRef D) {
  D->invalidate_diag_inv();
  if (m == 0 || n == 0) return FactorStatus::success();
  const auto a = panel_ptr(A);
  const auto b = panel_ptr(B);
  const auto c = panel_ptr(C);
  const auto d = panel_ptr(D);
  double* inv = D->diag_inv();
  int failed = -1;
  auto diagonal = [&]<int MR>(int i) {
    const auto dii = d.shifted(i, i);
    const auto spec = tile_spec<MR>(dii, m - i, n - i);
    const int f = k == 0 ? kernel::potrf_nt_l<MR>(i, d.shifted(i, 0), d.shifted(i, 0), c.shifted(i, i), dii, inv + i, spec)
                         : kernel::syrk_potrf_nt_l<MR>(k, a.shifted(i, 0), b.shifted(i, 0), i, d.shifted(i, 0),
                                                       d.shifted(i, 0), c.shifted(i, i), dii, inv + i, spec);
    if (f >= 0) failed = i + f;
  };
  for_row_tiles(m, [&](auto rows, int i) {
    if (failed >= 0) return;
    constexpr int MR = decltype(rows)::value;
    const auto di = d.shifted(i, 0);
    for (int j = 0; j < i && j < n; j += kNr) {
      const auto dij = d.shifted(i, j);
      const auto spec = tile_spec<MR>(dij, m - i, n - j);
      if (k == 0)
        kernel::trsm_nt_rl<MR>(j, di, d.shifted(j, 0), 1.0, c.shifted(i, j), dij, d.shifted(j, j), inv + j, false, spec);
      else
        kernel::gemm_trsm_nt_rl<MR>(k, a.shifted(i, 0), b.shifted(j, 0), j, di, d.shifted(j, 0), c.shifted(i, j), dij,
                                    d.shifted(j, j), inv + j, spec);
    }
    if (i >= n) return;
    // An 8-row tile factors its top 4 x 4 block and solves the 4 rows below
    // it; the second diagonal block follows with a 4-row kernel.
    diagonal.template operator()<MR>(i);
    if (MR > ps && failed < 0 && i + ps < n && i + ps < m) diagonal.template operator()<ps>(i + ps);
  });
  detail::finish_diag_inv(D, n, failed < 0);
  return failed < 0 ? FactorStatus::success() : FactorStatus::failure(failed);
}

}  // namespace

FactorStatus potrf_l(int m, PanelCRef C, PanelRef D) {
  check_window(C, m, m, "potrf_l: C");
  check_window(D, m, m, "potrf_l: D");
  return cholesky_sweep(m, m, 0, C, C, C, D);
}

FactorStatus potrf_l_mn(int m, int n, PanelCRef C, PanelRef D) {
  if (m < n) throw std::invalid_argument("potrf_l_mn: requires m >= n");
  check_window(C, m, n, "potrf_l_mn: C");
  check_window(D, m, n, "potrf_l_mn: D");
  return cholesky_sweep(m, n, 0, C, C, C, D);
}

FactorStatus syrk_potrf_ln(int m, int k, PanelCRef A, PanelCRef B, PanelCRef C, PanelRef D) {
  check_window(A, m, k, "syrk_potrf_ln: A");
  check_window(B, m, k, "syrk_potrf_ln: B");
  check_window(C, m, m, "syrk_potrf_ln: C");
  check_window(D, m, m, "syrk_potrf_ln: D");
  return cholesky_sweep(m, m, k, A, B, C, D);
}

FactorStatus syrk_potrf_ln_mn(int m, int n, int k, PanelCRef A, PanelCRef B, PanelCRef C, PanelRef D) {
  if (m < n) throw std::invalid_argument("syrk_potrf_ln_mn: requires m >= n");
  check_window(A, m, k, "syrk_potrf_ln_mn: A");
  check_window(B, n, k, "syrk_potrf_ln_mn: B");
  check_window(C, m, n, "syrk_potrf_ln_mn: C");
  check_window(D, m, n, "syrk_potrf_ln_mn: D");
  return cholesky_sweep(m, n, k, A, B, C, D);
}

// ---------------------------------------------------------------------------
// LU

namespace {

FactorStatus lu_sweep(int m, int n, PanelCRef C, PanelRef D, int* ipiv) {
  if (!same_window(C, D)) gecp(m, n, C, D);
  D->invalidate_diag_inv();
  const int kmin = std::min(m, n);
  if (kmin == 0) return FactorStatus::success();
  const auto d = panel_ptr(D);
  double* inv = D->diag_inv();

  for (int jb = 0; jb < n; jb += kNr) {
    const int nb = std::min(kNr, n - jb);
    // U rows above the block: unit-lower solves against the finished L.
    for (int i = 0; i < std::min(jb, m); i += ps) {
      const auto dij = d.shifted(i, jb);
      kernel::trsm_nn_ll_one<ps>(i, d.shifted(i, 0), d.shifted(0, jb), 1.0, dij, dij, d.shifted(i, i),
                                 tile_spec<ps>(dij, std::min(jb, m) - i, nb));
    }
    if (jb >= m) continue;
    // Rows from jb down: subtract L(:, 0:jb) * U(0:jb, block).
    if (jb > 0) {
      for_row_tiles(m - jb, [&](auto rows, int r) {
        constexpr int MR = decltype(rows)::value;
        const int i = jb + r;
        const auto dij = d.shifted(i, jb);
        kernel::gemm_nn<MR>(jb, -1.0, d.shifted(i, 0), d.shifted(0, jb), 1.0, dij, dij,
                            tile_spec<MR>(dij, m - i, nb));
      });
    }
    // Unblocked panel with whole-row interchanges.
    for (int c = jb; c < jb + nb && c < kmin; ++c) {
      int p = c;
      if (ipiv) {
        double best = std::fabs(d.at(c, c));
        for (int r = c + 1; r < m; ++r) {
          const double v = std::fabs(d.at(r, c));
          if (v > best) {
            best = v;
            p = r;
          }
        }
        ipiv[c] = p;
        if (p != c) row_swap(n, {*D.mat, D.i + c, D.j}, {*D.mat, D.i + p, D.j});
      }
      const double pivot = d.at(c, c);
      if (pivot == 0.0) {
        D->invalidate_diag_inv();
        return FactorStatus::failure(c);
      }
      const double rcp = 1.0 / pivot;
      inv[c] = rcp;
      for (int r = c + 1; r < m; ++r) d.at(r, c) *= rcp;
      for (int c2 = c + 1; c2 < jb + nb; ++c2) {
        const double u = d.at(c, c2);
        for (int r = c + 1; r < m; ++r) d.at(r, c2) -= d.at(r, c) * u;
      }
    }
  }
  detail::finish_diag_inv(D, kmin, true);
  return FactorStatus::success();
}

}  // namespace

FactorStatus getrf_nopivot(int m, int n, PanelCRef C, PanelRef D) {
  check_window(C, m, n, "getrf_nopivot: C");
  check_window(D, m, n, "getrf_nopivot: D");
  return lu_sweep(m, n, C, D, nullptr);
}

FactorStatus getrf_pivot(int m, int n, PanelCRef C, PanelRef D, std::span<int> ipiv) {
  check_window(C, m, n, "getrf_pivot: C");
  check_window(D, m, n, "getrf_pivot: D");
  if (ipiv.size() < static_cast<std::size_t>(std::min(m, n)))
    throw std::out_of_range("getrf_pivot: ipiv holds fewer than min(m, n) entries");
  return lu_sweep(m, n, C, D, ipiv.data());
}

// ---------------------------------------------------------------------------
// LQ

std::size_t gelqf_worksize(int m, int n) {
  return 2 * memsize_panel_matrix(ps, n) + memsize_panel_matrix(m, ps);
}

namespace {

// H = I - tau v v^T from x = [alpha, rest]: returns tau, overwrites alpha
// with beta and rest with v's tail.
double householder(double& alpha, double* rest, int len, int stride) {
  double ss = 0.0;
  for (int j = 0; j < len; ++j) ss += rest[j * stride] * rest[j * stride];
  if (ss == 0.0) return 0.0;
  const double beta = -std::copysign(std::sqrt(alpha * alpha + ss), alpha);
  const double tau = (beta - alpha) / beta;
  const double scale = 1.0 / (alpha - beta);
  for (int j = 0; j < len; ++j) rest[j * stride] *= scale;
  alpha = beta;
  return tau;
}

}  // namespace

void gelqf(int m, int n, PanelCRef C, PanelRef D, std::span<std::byte> work) {
  check_window(C, m, n, "gelqf: C");
  check_window(D, m, n, "gelqf: D");
  if (work.size() < gelqf_worksize(m, n)) throw std::invalid_argument("gelqf: work area smaller than gelqf_worksize");
  if (!same_window(C, D)) gecp(m, n, C, D);
  D->invalidate_diag_inv();
  const int kmin = std::min(m, n);
  if (kmin == 0) return;

  std::size_t used = 0;
  auto carve = [&](int r, int c) {
    const std::size_t bytes = memsize_panel_matrix(r, c);
    PanelMatrix M = create_panel_matrix(r, c, work.subspan(used, bytes));
    used += bytes;
    return M;
  };
  PanelMatrix V = carve(ps, n);
  PanelMatrix U = carve(ps, n);
  PanelMatrix W = carve(m, ps);

  const auto d = panel_ptr(D);
  double* tau = D->diag_inv();

  for (int ib = 0; ib < kmin; ib += ps) {
    const int nb = std::min(ps, kmin - ib);
    const int nt = n - ib;
    // Panel: reflect rows ib .. ib+nb-1, applying each reflector to the
    // panel rows below it.
    for (int i = ib; i < ib + nb; ++i) {
      double* row = &d.at(i, i);
      const int len = n - i - 1;
      tau[i] = householder(row[0], row + ps, len, ps);
      if (tau[i] == 0.0) continue;
      for (int r = i + 1; r < ib + nb; ++r) {
        double* x = &d.at(r, i);
        double w = x[0];
        for (int j = 1; j <= len; ++j) w += x[j * ps] * row[j * ps];
        w *= tau[i];
        x[0] -= w;
        for (int j = 1; j <= len; ++j) x[j * ps] -= w * row[j * ps];
      }
    }
    const int mt = m - ib - nb;
    if (mt <= 0) continue;

    // Explicit V (unit diagonal, zeros to the left).
    for (int l = 0; l < nb; ++l)
      for (int j = 0; j < nt; ++j) V(l, j) = j < l ? 0.0 : (j == l ? 1.0 : d.at(ib + l, ib + j));

    // T upper with H_ib ... H_ib+nb-1 = I - V^T T V.
    double T[ps][ps] = {};
    for (int i = 0; i < nb; ++i) {
      const double ti = tau[ib + i];
      T[i][i] = ti;
      double z[ps] = {};
      for (int l = 0; l < i; ++l) {
        double s = 0.0;
        for (int j = i; j < nt; ++j) s += V(l, j) * V(i, j);
        z[l] = -ti * s;
      }
      for (int l = 0; l < i; ++l) {
        double s = 0.0;
        for (int q = l; q < i; ++q) s += T[l][q] * z[q];
        T[l][i] = s;
      }
    }
    // U = T^T V.
    for (int r = 0; r < nb; ++r)
      for (int j = 0; j < nt; ++j) {
        double s = 0.0;
        for (int l = 0; l <= r; ++l) s += T[l][r] * V(l, j);
        U(r, j) = s;
      }

    // Trailing rows: C <- C - (C U^T) V.
    const PanelRef trail{*D.mat, D.i + ib + nb, D.j + ib};
    gemm_nt(mt, nb, nt, 1.0, trail, U, 0.0, W, W);
    gemm_nn(mt, nt, nb, -1.0, W, V, 1.0, trail, trail);
  }
  D->invalidate_diag_inv();
}

ColMatrix gelqf_q(int m, int n, PanelCRef D) {
  check_window(D, m, n, "gelqf_q: D");
  const int kmin = std::min(m, n);
  ColMatrix Q(kmin, n);
  for (int i = 0; i < kmin; ++i) Q(i, i) = 1.0;
  const auto d = panel_ptr(D);
  const double* tau = D->diag_inv();
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = kmin - 1; i >= 0; --i) {
    if (tau[i] == 0.0) continue;
    for (int j = 0; j < n; ++j) v[j] = j < i ? 0.0 : (j == i ? 1.0 : d.at(i, j));
    for (int r = 0; r < kmin; ++r) {
      double w = 0.0;
      for (int j = i; j < n; ++j) w += Q(r, j) * v[j];
      w *= tau[i];
      for (int j = i; j < n; ++j) Q(r, j) -= w * v[j];
    }
  }
  return Q;
}

}  // namespace panella
