#include "panella/level3.hpp"

#include <algorithm>
#include <vector>

#include "tiling.hpp"

namespace panella {

using detail::for_row_tiles;
using detail::tile_spec;

namespace {

constexpr int ps = kPanelSize;

}  // namespace

void gemm_nt(int m, int n, int k, double alpha, PanelCRef A, PanelCRef B, double beta, PanelCRef C, PanelRef D) {
  check_window(A, m, k, "gemm_nt: A");
  check_window(B, n, k, "gemm_nt: B");
  check_window(C, m, n, "gemm_nt: C");
  check_window(D, m, n, "gemm_nt: D");
  if (m == 0 || n == 0) return;
  D->invalidate_diag_inv();
  const auto a = panel_ptr(A);
  const auto b = panel_ptr(B);
  const auto c = panel_ptr(C);
  const auto d = panel_ptr(D);
  for_row_tiles(m, [&](auto rows, int i) {
    constexpr int MR = decltype(rows)::value;
    const auto ai = a.shifted(i, 0);
    for (int j = 0; j < n; j += kNr) {
      const auto dij = d.shifted(i, j);
      kernel::gemm_nt<MR>(k, alpha, ai, b.shifted(j, 0), beta, c.shifted(i, j), dij,
                          tile_spec<MR>(dij, m - i, n - j));
    }
  });
}

void gemm_nn(int m, int n, int k, double alpha, PanelCRef A, PanelCRef B, double beta, PanelCRef C, PanelRef D) {
  check_window(A, m, k, "gemm_nn: A");
  check_window(B, k, n, "gemm_nn: B");
  check_window(C, m, n, "gemm_nn: C");
  check_window(D, m, n, "gemm_nn: D");
  if (m == 0 || n == 0) return;
  D->invalidate_diag_inv();
  const auto a = panel_ptr(A);
  const auto b = panel_ptr(B);
  const auto c = panel_ptr(C);
  const auto d = panel_ptr(D);
  for_row_tiles(m, [&](auto rows, int i) {
    constexpr int MR = decltype(rows)::value;
    const auto ai = a.shifted(i, 0);
    for (int j = 0; j < n; j += kNr) {
      const auto dij = d.shifted(i, j);
      kernel::gemm_nn<MR>(k, alpha, ai, b.shifted(0, j), beta, c.shifted(i, j), dij,
                          tile_spec<MR>(dij, m - i, n - j));
    }
  });
}

void syrk_ln(int m, int k, double alpha, PanelCRef A, PanelCRef B, double beta, PanelCRef C, PanelRef D) {
  check_window(A, m, k, "syrk_ln: A");
  check_window(B, m, k, "syrk_ln: B");
  check_window(C, m, m, "syrk_ln: C");
  check_window(D, m, m, "syrk_ln: D");
  if (m == 0) return;
  D->invalidate_diag_inv();
  const auto a = panel_ptr(A);
  const auto b = panel_ptr(B);
  const auto c = panel_ptr(C);
  const auto d = panel_ptr(D);
  for_row_tiles(m, [&](auto rows, int i) {
    constexpr int MR = decltype(rows)::value;
    const auto ai = a.shifted(i, 0);
    for (int j = 0; j < i; j += kNr) {
      const auto dij = d.shifted(i, j);
      kernel::gemm_nt<MR>(k, alpha, ai, b.shifted(j, 0), beta, c.shifted(i, j), dij,
                          tile_spec<MR>(dij, m - i, m - j));
    }
    const auto dii = d.shifted(i, i);
    kernel::syrk_nt_l<MR>(k, alpha, ai, b.shifted(i, 0), beta, c.shifted(i, i), dii,
                          tile_spec<MR>(dii, m - i, m - i));
    if (MR > ps && i + ps < m) {
      const int i2 = i + ps;
      const auto d2 = d.shifted(i2, i2);
      kernel::syrk_nt_l<ps>(k, alpha, a.shifted(i2, 0), b.shifted(i2, 0), beta, c.shifted(i2, i2), d2,
                            tile_spec<ps>(d2, m - i2, m - i2));
    }
  });
}

void trmm_rlnn(int m, int n, double alpha, PanelCRef A, PanelCRef B, PanelRef D) {
  check_window(A, n, n, "trmm_rlnn: A");
  check_window(B, m, n, "trmm_rlnn: B");
  check_window(D, m, n, "trmm_rlnn: D");
  if (m == 0 || n == 0) return;
  D->invalidate_diag_inv();
  const auto a = panel_ptr(A);
  const auto b = panel_ptr(B);
  const auto d = panel_ptr(D);
  // Ascending column tiles: tile j only reads B columns >= j, so D may be B.
  for_row_tiles(m, [&](auto rows, int i) {
    constexpr int MR = decltype(rows)::value;
    for (int j = 0; j < n; j += kNr) {
      const auto dij = d.shifted(i, j);
      kernel::trmm_nn_rl<MR>(n - j, alpha, b.shifted(i, j), a.shifted(j, j), dij, tile_spec<MR>(dij, m - i, n - j));
    }
  });
}

namespace {

void check_trsm(int m, int n, int tri, PanelCRef A, PanelCRef B, PanelRef D, const char* a, const char* b,
                const char* dname) {
  check_window(A, tri, tri, a);
  check_window(B, m, n, b);
  check_window(D, m, n, dname);
}

// D * A^T = alpha * B for lower A; one solve per column tile, left to right.
void trsm_right_lower(int m, int n, double alpha, PanelCRef A, PanelCRef B, PanelRef D, bool unit,
                      const char* what) {
  check_trsm(m, n, n, A, B, D, "trsm_rlt: A", "trsm_rlt: B", "trsm_rlt: D");
  if (m == 0 || n == 0) return;
  const detail::InverseDiagonal inv(A, unit ? 0 : n, what);
  D->invalidate_diag_inv();
  const auto a = panel_ptr(A);
  const auto b = panel_ptr(B);
  const auto d = panel_ptr(D);
  for_row_tiles(m, [&](auto rows, int i) {
    constexpr int MR = decltype(rows)::value;
    const auto di = d.shifted(i, 0);
    for (int j = 0; j < n; j += kNr) {
      const auto dij = d.shifted(i, j);
      kernel::trsm_nt_rl<MR>(j, di, a.shifted(j, 0), alpha, b.shifted(i, j), dij, a.shifted(j, j),
                             unit ? nullptr : inv.data() + j, unit, tile_spec<MR>(dij, m - i, n - j));
    }
  });
}

}  // namespace

void trsm_rltn(int m, int n, double alpha, PanelCRef A, PanelCRef B, PanelRef D) {
  trsm_right_lower(m, n, alpha, A, B, D, false, "trsm_rltn");
}

void trsm_rltu(int m, int n, double alpha, PanelCRef A, PanelCRef B, PanelRef D) {
  trsm_right_lower(m, n, alpha, A, B, D, true, "trsm_rltu");
}

void trsm_rutn(int m, int n, double alpha, PanelCRef A, PanelCRef B, PanelRef D) {
  check_trsm(m, n, n, A, B, D, "trsm_rutn: A", "trsm_rutn: B", "trsm_rutn: D");
  if (m == 0 || n == 0) return;
  const detail::InverseDiagonal inv(A, n, "trsm_rutn");
  D->invalidate_diag_inv();
  const auto a = panel_ptr(A);
  const auto b = panel_ptr(B);
  const auto d = panel_ptr(D);
  const int last = (n - 1) / kNr * kNr;
  for_row_tiles(m, [&](auto rows, int i) {
    constexpr int MR = decltype(rows)::value;
    for (int j = last; j >= 0; j -= kNr) {
      const int nb = std::min(kNr, n - j);
      const auto dij = d.shifted(i, j);
      kernel::trsm_nt_ru<MR>(n - j - nb, d.shifted(i, j + nb), a.shifted(j, j + nb), alpha, b.shifted(i, j), dij,
                             a.shifted(j, j), inv.data() + j, tile_spec<MR>(dij, m - i, n - j));
    }
  });
}

void trsm_llnu(int m, int n, double alpha, PanelCRef A, PanelCRef B, PanelRef D) {
  check_trsm(m, n, m, A, B, D, "trsm_llnu: A", "trsm_llnu: B", "trsm_llnu: D");
  if (m == 0 || n == 0) return;
  D->invalidate_diag_inv();
  const auto a = panel_ptr(A);
  const auto b = panel_ptr(B);
  const auto d = panel_ptr(D);
  for_row_tiles(m, [&](auto rows, int i) {
    constexpr int MR = decltype(rows)::value;
    const auto ai = a.shifted(i, 0);
    for (int j = 0; j < n; j += kNr) {
      const auto dij = d.shifted(i, j);
      kernel::trsm_nn_ll_one<MR>(i, ai, d.shifted(0, j), alpha, b.shifted(i, j), dij, a.shifted(i, i),
                                 tile_spec<MR>(dij, m - i, n - j));
    }
  });
}

void trsm_lunn(int m, int n, double alpha, PanelCRef A, PanelCRef B, PanelRef D) {
  check_trsm(m, n, m, A, B, D, "trsm_lunn: A", "trsm_lunn: B", "trsm_lunn: D");
  if (m == 0 || n == 0) return;
  const detail::InverseDiagonal inv(A, m, "trsm_lunn");
  D->invalidate_diag_inv();
  const auto a = panel_ptr(A);
  const auto b = panel_ptr(B);
  const auto d = panel_ptr(D);
  // Same row tiling as the other routines, visited bottom to top.
  std::vector<int> starts;
  for_row_tiles(m, [&](auto, int i) { starts.push_back(i); });
  auto tile = [&](auto rows, int i) {
    constexpr int MR = decltype(rows)::value;
    const int mb = std::min(MR, m - i);
    for (int j = 0; j < n; j += kNr) {
      const auto dij = d.shifted(i, j);
      kernel::trsm_nn_lu<MR>(m - i - mb, a.shifted(i, i + mb), d.shifted(i + mb, j), alpha, b.shifted(i, j), dij,
                             a.shifted(i, i), inv.data() + i, tile_spec<MR>(dij, m - i, n - j));
    }
  };
  for (auto it = starts.rbegin(); it != starts.rend(); ++it) {
    const int i = *it;
    if (m - i > ps)
      tile(detail::Rows<2 * ps>{}, i);
    else
      tile(detail::Rows<ps>{}, i);
  }
}

void trsm(TrsmVariant variant, int m, int n, double alpha, PanelCRef A, PanelCRef B, PanelRef D) {
  switch (variant) {
    case TrsmVariant::llnu:
      return trsm_llnu(m, n, alpha, A, B, D);
    case TrsmVariant::lunn:
      return trsm_lunn(m, n, alpha, A, B, D);
    case TrsmVariant::rltn:
      return trsm_rltn(m, n, alpha, A, B, D);
    case TrsmVariant::rltu:
      return trsm_rltu(m, n, alpha, A, B, D);
    case TrsmVariant::rutn:
      return trsm_rutn(m, n, alpha, A, B, D);
  }
}

const char* to_string(TrsmVariant variant) noexcept {
  switch (variant) {
    case TrsmVariant::llnu:
      return "llnu";
    case TrsmVariant::lunn:
      return "lunn";
    case TrsmVariant::rltn:
      return "rltn";
    case TrsmVariant::rltu:
      return "rltu";
    case TrsmVariant::rutn:
      return "rutn";
  }
  return "?";
}

}  // namespace panella
