#include "panella/pack.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>

namespace panella {

namespace {

constexpr int ps = kPanelSize;

// Calls f(row, pointer to the row's column-0 element); columns are ps apart.
template <class T, class F>
void for_each_row(PanelPtr<T> p, int m, F&& f) {
  for (int i = 0; i < m; ++i) f(i, &p.at(i, 0));
}

const double* col_elem(ColCRef A, int i, int j) {
  return A->data() + (A.i + i) + static_cast<std::ptrdiff_t>(A.j + j) * A->leading_dimension();
}
double* col_elem(ColRef A, int i, int j) { return &(*A.mat)(A.i + i, A.j + j); }

}  // namespace

void pack_matrix(int m, int n, ColCRef src, PanelRef dst) {
  check_window(src, m, n, "pack_matrix: src");
  check_window(dst, m, n, "pack_matrix: dst");
  if (m == 0 || n == 0) return;
  dst->invalidate_diag_inv();
  const int lda = src->leading_dimension();
  const double* a = col_elem(src, 0, 0);
  for_each_row(panel_ptr(dst), m, [&](int i, double* row) {
    for (int j = 0; j < n; ++j) row[j * ps] = a[i + static_cast<std::ptrdiff_t>(j) * lda];
  });
}

void pack_matrix_transposed(int m, int n, ColCRef src, PanelRef dst) {
  check_window(src, m, n, "pack_matrix_transposed: src");
  check_window(dst, n, m, "pack_matrix_transposed: dst");
  if (m == 0 || n == 0) return;
  dst->invalidate_diag_inv();
  const int lda = src->leading_dimension();
  const double* a = col_elem(src, 0, 0);
  for_each_row(panel_ptr(dst), n, [&](int j, double* row) {
    const double* col = a + static_cast<std::ptrdiff_t>(j) * lda;
    for (int i = 0; i < m; ++i) row[i * ps] = col[i];
  });
}

void unpack_matrix(int m, int n, PanelCRef src, ColRef dst) {
  check_window(src, m, n, "unpack_matrix: src");
  check_window(dst, m, n, "unpack_matrix: dst");
  if (m == 0 || n == 0) return;
  const int ldb = dst->leading_dimension();
  double* b = col_elem(dst, 0, 0);
  for_each_row(panel_ptr(src), m, [&](int i, const double* row) {
    for (int j = 0; j < n; ++j) b[i + static_cast<std::ptrdiff_t>(j) * ldb] = row[j * ps];
  });
}

PanelMatrix to_panel(const ColMatrix& A) {
  PanelMatrix P = allocate_panel_matrix(A.rows(), A.cols());
  pack_matrix(A.rows(), A.cols(), A, P);
  return P;
}

ColMatrix to_col(const PanelMatrix& A) {
  ColMatrix C(A.rows(), A.cols());
  unpack_matrix(A.rows(), A.cols(), A, C);
  return C;
}

void gecp(int m, int n, PanelCRef A, PanelRef B) {
  check_window(A, m, n, "gecp: A");
  check_window(B, m, n, "gecp: B");
  if (m == 0 || n == 0) return;
  B->invalidate_diag_inv();
  const auto a = panel_ptr(A);
  const auto b = panel_ptr(B);
  if (a.offset == b.offset) {
    // Same in-panel phase: copy whole panel-column segments.
    for (int i = 0; i < m;) {
      const int rr = (a.offset + i) & (ps - 1);
      const int len = std::min(ps - rr, m - i);
      const double* src = &a.at(i, 0);
      double* dst = &b.at(i, 0);
      for (int j = 0; j < n; ++j)
        for (int r = 0; r < len; ++r) dst[j * ps + r] = src[j * ps + r];
      i += len;
    }
    return;
  }
  for (int i = 0; i < m; ++i) {
    const double* src = &a.at(i, 0);
    double* dst = &b.at(i, 0);
    for (int j = 0; j < n; ++j) dst[j * ps] = src[j * ps];
  }
}

void getr(int m, int n, PanelCRef A, PanelRef B) {
  check_window(A, m, n, "getr: A");
  check_window(B, n, m, "getr: B");
  if (m == 0 || n == 0) return;
  B->invalidate_diag_inv();
  const auto a = panel_ptr(A);
  const auto b = panel_ptr(B);
  for (int i = 0; i < m; ++i) {
    const double* src = &a.at(i, 0);
    for (int j = 0; j < n; ++j) b.at(j, i) = src[j * ps];
  }
}

void gesc(int m, int n, double alpha, PanelRef A) {
  check_window(A, m, n, "gesc");
  if (m == 0 || n == 0) return;
  A->invalidate_diag_inv();
  for_each_row(panel_ptr(A), m, [&](int, double* row) {
    for (int j = 0; j < n; ++j) row[j * ps] *= alpha;
  });
}

void gese(int m, int n, double alpha, PanelRef A) {
  check_window(A, m, n, "gese");
  if (m == 0 || n == 0) return;
  A->invalidate_diag_inv();
  for_each_row(panel_ptr(A), m, [&](int, double* row) {
    for (int j = 0; j < n; ++j) row[j * ps] = alpha;
  });
}

void gead(int m, int n, double alpha, PanelCRef A, PanelRef B) {
  check_window(A, m, n, "gead: A");
  check_window(B, m, n, "gead: B");
  if (m == 0 || n == 0) return;
  B->invalidate_diag_inv();
  const auto a = panel_ptr(A);
  const auto b = panel_ptr(B);
  for (int i = 0; i < m; ++i) {
    const double* src = &a.at(i, 0);
    double* dst = &b.at(i, 0);
    for (int j = 0; j < n; ++j) dst[j * ps] += alpha * src[j * ps];
  }
}

void diag_extract(int n, PanelCRef A, VecRef x) {
  check_window(A, n, n, "diag_extract: A");
  check_subvector(x, n, "diag_extract: x");
  const auto a = panel_ptr(A);
  double* px = x.ptr();
  for (int k = 0; k < n; ++k) px[k] = a.at(k, k);
}

void diag_insert(int n, VecCRef x, PanelRef A) {
  check_subvector(x, n, "diag_insert: x");
  check_window(A, n, n, "diag_insert: A");
  if (n == 0) return;
  A->invalidate_diag_inv();
  const auto a = panel_ptr(A);
  const double* px = x.ptr();
  for (int k = 0; k < n; ++k) a.at(k, k) = px[k];
}

void row_extract(int n, PanelCRef A, VecRef x) {
  check_window(A, 1, n, "row_extract: A");
  check_subvector(x, n, "row_extract: x");
  const double* row = &panel_ptr(A).at(0, 0);
  double* px = x.ptr();
  for (int j = 0; j < n; ++j) px[j] = row[j * ps];
}

void row_insert(int n, VecCRef x, PanelRef A) {
  check_subvector(x, n, "row_insert: x");
  check_window(A, 1, n, "row_insert: A");
  if (n == 0) return;
  A->invalidate_diag_inv();
  double* row = &panel_ptr(A).at(0, 0);
  const double* px = x.ptr();
  for (int j = 0; j < n; ++j) row[j * ps] = px[j];
}

void col_extract(int m, PanelCRef A, VecRef x) {
  check_window(A, m, 1, "col_extract: A");
  check_subvector(x, m, "col_extract: x");
  const auto a = panel_ptr(A);
  double* px = x.ptr();
  for (int i = 0; i < m; ++i) px[i] = a.at(i, 0);
}

void col_insert(int m, VecCRef x, PanelRef A) {
  check_subvector(x, m, "col_insert: x");
  check_window(A, m, 1, "col_insert: A");
  if (m == 0) return;
  A->invalidate_diag_inv();
  const auto a = panel_ptr(A);
  const double* px = x.ptr();
  for (int i = 0; i < m; ++i) a.at(i, 0) = px[i];
}

void row_swap(int n, PanelRef a, PanelRef b) {
  check_window(a, 1, n, "row_swap: first row");
  check_window(b, 1, n, "row_swap: second row");
  if (n == 0) return;
  a->invalidate_diag_inv();
  b->invalidate_diag_inv();
  double* ra = &panel_ptr(a).at(0, 0);
  double* rb = &panel_ptr(b).at(0, 0);
  if (ra == rb) return;
  for (int j = 0; j < n; ++j) std::swap(ra[j * ps], rb[j * ps]);
}

namespace {

void check_pivots(std::span<const int> ipiv, PanelCRef A, const char* what) {
  const int rows = A->rows() - A.i;
  for (std::size_t k = 0; k < ipiv.size(); ++k) {
    const int r = ipiv[k];
    if (r < static_cast<int>(k) || r >= rows) {
      throw std::out_of_range(std::string(what) + ": ipiv[" + std::to_string(k) + "] = " + std::to_string(r) +
                              " is outside [" + std::to_string(k) + ", " + std::to_string(rows) + ")");
    }
  }
}

}  // namespace

void apply_row_permutation(int n, std::span<const int> ipiv, PanelRef A) {
  check_pivots(ipiv, A, "apply_row_permutation");
  check_window(A, static_cast<int>(ipiv.size()), n, "apply_row_permutation");
  for (std::size_t k = 0; k < ipiv.size(); ++k) {
    const int r = ipiv[k];
    if (r != static_cast<int>(k)) row_swap(n, {*A.mat, A.i + static_cast<int>(k), A.j}, {*A.mat, A.i + r, A.j});
  }
}

void apply_inverse_row_permutation(int n, std::span<const int> ipiv, PanelRef A) {
  check_pivots(ipiv, A, "apply_inverse_row_permutation");
  check_window(A, static_cast<int>(ipiv.size()), n, "apply_inverse_row_permutation");
  for (std::size_t k = ipiv.size(); k-- > 0;) {
    const int r = ipiv[k];
    if (r != static_cast<int>(k)) row_swap(n, {*A.mat, A.i + static_cast<int>(k), A.j}, {*A.mat, A.i + r, A.j});
  }
}

}  // namespace panella
