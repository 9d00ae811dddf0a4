#pragma once

// Register-blocked inner kernels on panel-major operands.
//
// Every kernel computes a full MR x 4 accumulator block (MR in {4, 8}) with
// one loop over the shared dimension k and then stores it through a
// StoreSpec.  The store decides how much of the block reaches memory:
//
//   Nominal      the whole MR x 4 block; destination row 0 at a panel top.
//   VariableSize the leading m_store x n_store part; row 0 at a panel top.
//   Generalized  the leading m_store x n_store part with row 0 at
//                panel_row_offset inside its panel; rows past the panel
//                end carry over into the following panel(s).
//
// All three variants share the accumulation code, so they produce
// bit-identical values wherever their store masks overlap.  Loads of the
// C operand are masked the same way and follow C's own panel offset.
//
// Operand conventions (A is the MR-row operand, B the 4-row or 4-column one):
//   *_nt kernels read A(r, kk) and B(c, kk), both row windows of k columns.
//   *_nn kernels read A(r, kk) and B(kk, c); B may start at any row offset
//   and is streamed across panels along kk.
// Rows of A past m_store and rows/columns of B past n_store are never used
// in a stored element.  When A or B is not panel-aligned those rows are not
// read at all.

#include <cassert>

#include "panella/matstore.hpp"

namespace panella {

struct KernelShape {
  int mr;
  int nr;
};

inline constexpr int kNr = kPanelSize;
inline constexpr KernelShape kShape4x4{4, kNr};
inline constexpr KernelShape kShape8x4{8, kNr};

enum class StoreMode { Nominal, VariableSize, Generalized };

struct StoreSpec {
  StoreMode mode = StoreMode::Nominal;
  int m_store = 0;
  int n_store = 0;
  int panel_row_offset = 0;

  static constexpr StoreSpec nominal(int mr) noexcept { return {StoreMode::Nominal, mr, kNr, 0}; }
  static constexpr StoreSpec variable(int m, int n) noexcept { return {StoreMode::VariableSize, m, n, 0}; }
  static constexpr StoreSpec generalized(int offset, int m, int n) noexcept {
    return {StoreMode::Generalized, m, n, offset};
  }

  /// Checks the mode invariants against a kernel height.
  constexpr bool valid_for(int mr) const noexcept {
    if (m_store < 0 || m_store > mr || n_store < 0 || n_store > kNr) return false;
    if (panel_row_offset < 0 || panel_row_offset >= kPanelSize) return false;
    switch (mode) {
      case StoreMode::Nominal:
        return m_store == mr && n_store == kNr && panel_row_offset == 0;
      case StoreMode::VariableSize:
        return panel_row_offset == 0;
      case StoreMode::Generalized:
        return true;
    }
    return false;
  }
};

namespace kernel {

/// D = alpha * A * B^T + beta * C.  C is not read when beta == 0.
template <int MR>
void gemm_nt(int k, double alpha, ConstPanelPtr A, ConstPanelPtr B, double beta, ConstPanelPtr C,
             MutPanelPtr D, const StoreSpec& spec);

/// D = alpha * A * B + beta * C, B read across panels from its row offset.
template <int MR>
void gemm_nn(int k, double alpha, ConstPanelPtr A, ConstPanelPtr B, double beta, ConstPanelPtr C,
             MutPanelPtr D, const StoreSpec& spec);

/// gemm_nt whose store keeps only elements on or below the block diagonal
/// (the block's top-left element sits on the diagonal of the result).
template <int MR>
void syrk_nt_l(int k, double alpha, ConstPanelPtr A, ConstPanelPtr B, double beta, ConstPanelPtr C,
               MutPanelPtr D, const StoreSpec& spec);

/// D = (alpha * C - A * B^T) * E^{-T}, E the 4 x 4 lower triangle at E.
/// Non-unit: E's diagonal is applied through inv_diag (one multiply per
/// element).  Unit: inv_diag is ignored and may be null.
template <int MR>
void trsm_nt_rl(int k, ConstPanelPtr A, ConstPanelPtr B, double alpha, ConstPanelPtr C, MutPanelPtr D,
                ConstPanelPtr E, const double* inv_diag, bool unit, const StoreSpec& spec);

/// As trsm_nt_rl with E upper triangular (columns solved right to left).
template <int MR>
void trsm_nt_ru(int k, ConstPanelPtr A, ConstPanelPtr B, double alpha, ConstPanelPtr C, MutPanelPtr D,
                ConstPanelPtr E, const double* inv_diag, const StoreSpec& spec);

/// D = E^{-1} * (alpha * C - A * B), E the MR x MR unit lower triangle.
template <int MR>
void trsm_nn_ll_one(int k, ConstPanelPtr A, ConstPanelPtr B, double alpha, ConstPanelPtr C, MutPanelPtr D,
                    ConstPanelPtr E, const StoreSpec& spec);

/// D = E^{-1} * (alpha * C - A * B), E the MR x MR upper triangle with
/// inverse diagonal inv_diag.
template <int MR>
void trsm_nn_lu(int k, ConstPanelPtr A, ConstPanelPtr B, double alpha, ConstPanelPtr C, MutPanelPtr D,
                ConstPanelPtr E, const double* inv_diag, const StoreSpec& spec);

/// Lower Cholesky step on C - A * B^T: the top 4 x 4 of the block is
/// factorized and the rows below it are solved against that factor.
/// inv_diag receives 1 / L(c, c) for the stored columns.  Returns -1 on
/// success or the block-local column of the first non-positive pivot.
template <int MR>
int potrf_nt_l(int k, ConstPanelPtr A, ConstPanelPtr B, ConstPanelPtr C, MutPanelPtr D, double* inv_diag,
               const StoreSpec& spec);

/// Fused update/downdate and factorization of one block:
///   chol((C + Ap * Bp^T) - Am * Bm^T)
/// Bit-identical to syrk_nt_l(kp, 1, Ap, Bp, 1, C, T) followed by
/// potrf_nt_l(km, Am, Bm, T, D).
template <int MR>
int syrk_potrf_nt_l(int kp, ConstPanelPtr Ap, ConstPanelPtr Bp, int km, ConstPanelPtr Am, ConstPanelPtr Bm,
                    ConstPanelPtr C, MutPanelPtr D, double* inv_diag, const StoreSpec& spec);

/// Off-diagonal counterpart: ((C + Ap * Bp^T) - Am * Bm^T) * E^{-T}.
template <int MR>
void gemm_trsm_nt_rl(int kp, ConstPanelPtr Ap, ConstPanelPtr Bp, int km, ConstPanelPtr Am, ConstPanelPtr Bm,
                     ConstPanelPtr C, MutPanelPtr D, ConstPanelPtr E, const double* inv_diag,
                     const StoreSpec& spec);

/// D = alpha * A * B with B a k x 4 block whose top 4 x 4 is lower
/// triangular (B(kk, c) = 0 for kk < c), i.e. the column block of a
/// lower-triangular right factor starting at its diagonal.
template <int MR>
void trmm_nn_rl(int k, double alpha, ConstPanelPtr A, ConstPanelPtr B, MutPanelPtr D, const StoreSpec& spec);

}  // namespace kernel
}  // namespace panella
