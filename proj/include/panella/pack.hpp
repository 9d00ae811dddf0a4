#pragma once

// Conversions between column-major and panel-major storage, and the
// auxiliary copy/scale/extract/permute routines used around factorizations.
// Every routine accepts arbitrary sub-matrix origins, including rows that
// are not at the top of a panel.

#include <span>

#include "panella/matstore.hpp"

namespace panella {

/// dst(i, j) = src(i, j) for the m x n window.
void pack_matrix(int m, int n, ColCRef src, PanelRef dst);
/// dst(j, i) = src(i, j); src window is m x n, dst window n x m.
void pack_matrix_transposed(int m, int n, ColCRef src, PanelRef dst);
void unpack_matrix(int m, int n, PanelCRef src, ColRef dst);

/// Whole-matrix conveniences.
PanelMatrix to_panel(const ColMatrix& A);
ColMatrix to_col(const PanelMatrix& A);

/// B = A (general copy).
void gecp(int m, int n, PanelCRef A, PanelRef B);
/// B = A^T; A window m x n, B window n x m.  A and B must not overlap.
void getr(int m, int n, PanelCRef A, PanelRef B);
/// A = alpha * A.
void gesc(int m, int n, double alpha, PanelRef A);
/// A(i, j) = alpha for the whole window.
void gese(int m, int n, double alpha, PanelRef A);
/// B = alpha * A + B.
void gead(int m, int n, double alpha, PanelCRef A, PanelRef B);

void diag_extract(int n, PanelCRef A, VecRef x);
void diag_insert(int n, VecCRef x, PanelRef A);
/// x = row A(ai, aj : aj + n).
void row_extract(int n, PanelCRef A, VecRef x);
void row_insert(int n, VecCRef x, PanelRef A);
/// x = column A(ai : ai + m, aj).
void col_extract(int m, PanelCRef A, VecRef x);
void col_insert(int m, VecCRef x, PanelRef A);

/// Exchanges the n-element row segments starting at a and b.  Both may
/// refer to the same matrix and may live in different panels.
void row_swap(int n, PanelRef a, PanelRef b);

/// Applies the transposition list ipiv (LAPACK convention: row k was
/// swapped with row ipiv[k] >= k, indices relative to A's origin) to the
/// rows of the window starting at A, n columns wide.  The inverse applies
/// the same list in reverse order.
void apply_row_permutation(int n, std::span<const int> ipiv, PanelRef A);
void apply_inverse_row_permutation(int n, std::span<const int> ipiv, PanelRef A);

}  // namespace panella
