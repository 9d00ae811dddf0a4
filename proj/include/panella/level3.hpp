#pragma once

// Level-3 routines and factorizations on panel-major matrices.
//
// Sizes come first, then operands as (matrix, row, column) windows.  C and D
// are separate input and output windows; they may be the same window, but
// any other overlap between an output and an input is undefined.  Any
// origin is accepted, including rows that do not start a panel.
//
// Every routine walks the result in tiles: an outer loop over row tiles
// (8 rows while more than 4 remain, otherwise 4) and an inner loop over
// 4-column tiles.  There is no cache blocking.

#include <cstddef>
#include <span>

#include "panella/errors.hpp"
#include "panella/matstore.hpp"

namespace panella {

/// D = alpha * A * B^T + beta * C.  A is m x k, B is n x k.
void gemm_nt(int m, int n, int k, double alpha, PanelCRef A, PanelCRef B, double beta, PanelCRef C, PanelRef D);
/// D = alpha * A * B + beta * C.  A is m x k, B is k x n.
void gemm_nn(int m, int n, int k, double alpha, PanelCRef A, PanelCRef B, double beta, PanelCRef C, PanelRef D);

/// Lower triangle of D = alpha * A * B^T + beta * C (m x m); the strictly
/// upper part of D is not written.
void syrk_ln(int m, int k, double alpha, PanelCRef A, PanelCRef B, double beta, PanelCRef C, PanelRef D);

/// D = alpha * B * A with A n x n lower triangular (its upper part is not
/// read) and B m x n.  D may be the same window as B.
void trmm_rlnn(int m, int n, double alpha, PanelCRef A, PanelCRef B, PanelRef D);

// Triangular solves, D m x n.  Option letters: side (l/r), triangle (l/u),
// transposition (n/t), unit diagonal (u) or not (n).
//
// Non-unit variants use A's diag_inv when A's window is at the origin and
// a factorization left at least as many valid entries there; otherwise the
// reciprocals are computed once into a local array.  A zero diagonal then
// throws SingularMatrixError.

/// A * D = alpha * B, A m x m lower, unit diagonal.
void trsm_llnu(int m, int n, double alpha, PanelCRef A, PanelCRef B, PanelRef D);
/// A * D = alpha * B, A m x m upper.
void trsm_lunn(int m, int n, double alpha, PanelCRef A, PanelCRef B, PanelRef D);
/// D * A^T = alpha * B, A n x n lower.
void trsm_rltn(int m, int n, double alpha, PanelCRef A, PanelCRef B, PanelRef D);
/// D * A^T = alpha * B, A n x n lower, unit diagonal.
void trsm_rltu(int m, int n, double alpha, PanelCRef A, PanelCRef B, PanelRef D);
/// D * A^T = alpha * B, A n x n upper.
void trsm_rutn(int m, int n, double alpha, PanelCRef A, PanelCRef B, PanelRef D);

enum class TrsmVariant { llnu, lunn, rltn, rltu, rutn };
void trsm(TrsmVariant variant, int m, int n, double alpha, PanelCRef A, PanelCRef B, PanelRef D);
const char* to_string(TrsmVariant variant) noexcept;

// Factorizations.  Each fills diag_inv of D window-relatively (entry 0 is
// the window's first diagonal element).  The valid count is recorded only
// when D's window is at the origin.

/// Lower Cholesky factor of the lower triangle of C (m x m).
FactorStatus potrf_l(int m, PanelCRef C, PanelRef D);
/// Cholesky of the leading n x n lower triangle of the m x n window
/// (m >= n), with the m - n rows below solved against it:
/// D = [L; C2 * L^-T].
FactorStatus potrf_l_mn(int m, int n, PanelCRef C, PanelRef D);

/// D = chol(lower(C + A * B^T)) in one sweep, A and B m x k.
FactorStatus syrk_potrf_ln(int m, int k, PanelCRef A, PanelCRef B, PanelCRef C, PanelRef D);
/// Rectangular form: potrf_l_mn(m, n, C + A * B^T); A is m x k, B n x k.
FactorStatus syrk_potrf_ln_mn(int m, int n, int k, PanelCRef A, PanelCRef B, PanelCRef C, PanelRef D);

/// D = L\U of C (m x n) without pivoting.  Fails on an exactly zero pivot.
FactorStatus getrf_nopivot(int m, int n, PanelCRef C, PanelRef D);
/// Partial pivoting: P * C = L * U.  ipiv needs min(m, n) entries and gets
/// the transposition list (row k was swapped with row ipiv[k] >= k).
/// Fails when the whole remaining column is zero.
FactorStatus getrf_pivot(int m, int n, PanelCRef C, PanelRef D, std::span<int> ipiv);

/// Bytes of scratch gelqf needs for an m x n input.
std::size_t gelqf_worksize(int m, int n);
/// Householder LQ of C (m x n).  D receives L in its lower triangle, the
/// reflector vectors to the right of the diagonal (row i holds v_i with an
/// implicit leading 1 at column i), and the reflector scalars tau_i in
/// diag_inv()[i].  C = L * Q with Q = H_{k-1} ... H_0 restricted to its
/// first k = min(m, n) rows and H_i = I - tau_i v_i v_i^T.
void gelqf(int m, int n, PanelCRef C, PanelRef D, std::span<std::byte> work);
/// Forms the k x n matrix Q from gelqf output.
ColMatrix gelqf_q(int m, int n, PanelCRef D);

}  // namespace panella
