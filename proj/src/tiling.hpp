#pragma once

// Internal helpers shared by the routine drivers.

#include <algorithm>
#include <type_traits>
#include <vector>

#include "panella/errors.hpp"
#include "panella/kernels.hpp"

namespace panella::detail {

template <int MR>
using Rows = std::integral_constant<int, MR>;

/// Row tiles: 8 rows while more than 4 remain, then 4.  f(Rows<MR>, i).
template <class F>
void for_row_tiles(int m, F&& f) {
  for (int i = 0; i < m;) {
    if (m - i > kPanelSize) {
      f(Rows<2 * kPanelSize>{}, i);
      i += 2 * kPanelSize;
    } else {
      f(Rows<kPanelSize>{}, i);
      i += kPanelSize;
    }
  }
}

/// Store descriptor for a tile whose destination starts at `d` (already
/// shifted to the tile), with `rows` x `cols` valid elements.
template <int MR>
StoreSpec tile_spec(MutPanelPtr d, int rows, int cols) {
  rows = std::min(rows, MR);
  cols = std::min(cols, kNr);
  if (d.offset != 0) return StoreSpec::generalized(d.offset, rows, cols);
  if (rows == MR && cols == kNr) return StoreSpec::nominal(MR);
  return StoreSpec::variable(rows, cols);
}

/// Reciprocals of the first n diagonal entries of the triangle at A.
/// Reuses A's diag_inv when it is valid for this window.
class InverseDiagonal {
 public:
  InverseDiagonal(PanelCRef A, int n, const char* what) {
    if (A.i == 0 && A.j == 0 && A->diag_inv_valid() >= n) {
      ptr_ = A->diag_inv();
      return;
    }
    local_.resize(static_cast<std::size_t>(n));
    const auto a = panel_ptr(A);
    for (int k = 0; k < n; ++k) {
      const double d = a.at(k, k);
      if (d == 0.0) throw SingularMatrixError(what, k);
      local_[static_cast<std::size_t>(k)] = 1.0 / d;
    }
    ptr_ = local_.data();
  }
  const double* data() const noexcept { return ptr_; }

 private:
  std::vector<double> local_;
  const double* ptr_ = nullptr;
};

/// Records the diag_inv valid count after a factorization of D's window.
inline void finish_diag_inv(PanelRef D, int count, bool ok) {
  D->set_diag_inv_valid(ok && D.i == 0 && D.j == 0 ? count : 0);
}

}  // namespace panella::detail
