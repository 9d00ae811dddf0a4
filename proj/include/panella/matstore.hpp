#pragma once

// Matrix and vector containers.
//
// PanelMatrix is the native format: rows are grouped into horizontal panels
// of kPanelSize rows, and inside a panel each column segment of kPanelSize
// elements is contiguous.  Element (i, j) of a matrix whose panels hold
// `sda` columns lives at
//
//     (i - i % ps) * sda + j * ps + i % ps
//
// which is the order in which the level-3 kernels stream their operands.
//
// ColMatrix is a plain column-major matrix used for interchange, for the
// reference implementation and for the test oracles.

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

namespace panella {

/// Rows per panel.  One library-wide value so that every panel matrix can
/// be an operand of every routine.
inline constexpr int kPanelSize = 4;
static_assert((kPanelSize & (kPanelSize - 1)) == 0, "panel size must be a power of two");

/// Byte alignment of matrix/vector storage and granularity of memsize.
inline constexpr std::size_t kAlignment = 64;

constexpr std::ptrdiff_t element_offset(int ai, int aj, int ps, int sda) noexcept {
  const int air = ai & (ps - 1);
  return static_cast<std::ptrdiff_t>(ai - air) * sda + static_cast<std::ptrdiff_t>(aj) * ps + air;
}

constexpr int round_up(int x, int to) noexcept { return (x + to - 1) / to * to; }

/// Bytes required by create_panel_matrix(m, n, ...).
std::size_t memsize_panel_matrix(int m, int n);

/// Descriptor of a panel-major matrix.
///
/// Copying a PanelMatrix copies the descriptor, not the elements: both
/// copies address the same storage (use gecp for a deep copy).  Storage
/// obtained from allocate_panel_matrix stays alive as long as any copy does.
class PanelMatrix {
 public:
  PanelMatrix() = default;

  int rows() const noexcept { return m_; }
  int cols() const noexcept { return n_; }
  /// Columns allocated per panel (the panel-major leading dimension).
  int panel_length() const noexcept { return cn_; }
  int panel_count() const noexcept { return (m_ + kPanelSize - 1) / kPanelSize; }
  std::size_t memsize() const noexcept { return memsize_; }
  std::size_t data_size() const noexcept {
    return static_cast<std::size_t>(panel_count()) * kPanelSize * cn_;
  }

  double* data() noexcept { return data_; }
  const double* data() const noexcept { return data_; }
  std::span<double> storage() noexcept { return {data_, data_size()}; }
  std::span<const double> storage() const noexcept { return {data_, data_size()}; }

  /// Inverse-diagonal array, min(rows, cols) entries.
  double* diag_inv() noexcept { return dinv_; }
  const double* diag_inv() const noexcept { return dinv_; }
  int diag_inv_size() const noexcept { return m_ < n_ ? m_ : n_; }

  /// Number of leading diag_inv entries known to hold 1 / D(k, k) of a
  /// factorization computed at the origin.  Any other write through the
  /// library resets it to zero.
  int diag_inv_valid() const noexcept { return dinv_valid_; }
  void set_diag_inv_valid(int count) noexcept { dinv_valid_ = count; }
  void invalidate_diag_inv() noexcept { dinv_valid_ = 0; }

  // Unchecked element access.
  double& operator()(int i, int j) noexcept { return data_[element_offset(i, j, kPanelSize, cn_)]; }
  double operator()(int i, int j) const noexcept {
    return data_[element_offset(i, j, kPanelSize, cn_)];
  }

 private:
  friend PanelMatrix create_panel_matrix(int m, int n, std::span<std::byte> memory);
  friend PanelMatrix allocate_panel_matrix(int m, int n);

  double* data_ = nullptr;
  double* dinv_ = nullptr;
  int m_ = 0;
  int n_ = 0;
  int cn_ = 0;
  int dinv_valid_ = 0;
  std::size_t memsize_ = 0;
  std::shared_ptr<std::byte> owner_;
};

/// Builds a descriptor over caller-provided memory.  The memory is not
/// touched, so a region holding panel-major data can be reinterpreted.
/// Throws std::invalid_argument if the region is misaligned or too small.
PanelMatrix create_panel_matrix(int m, int n, std::span<std::byte> memory);

/// Same as create_panel_matrix with internally allocated, zero-filled memory.
PanelMatrix allocate_panel_matrix(int m, int n);

/// Bounds-checked element access; throws std::out_of_range.
double get_element(const PanelMatrix& A, int i, int j);
void set_element(PanelMatrix& A, int i, int j, double value);

/// Contiguous vector.  Same descriptor semantics as PanelMatrix.
class DenseVector {
 public:
  DenseVector() = default;

  int size() const noexcept { return m_; }
  std::size_t memsize() const noexcept { return memsize_; }
  double* data() noexcept { return data_; }
  const double* data() const noexcept { return data_; }
  std::span<double> values() noexcept { return {data_, static_cast<std::size_t>(m_)}; }
  std::span<const double> values() const noexcept { return {data_, static_cast<std::size_t>(m_)}; }
  double& operator[](int i) noexcept { return data_[i]; }
  double operator[](int i) const noexcept { return data_[i]; }

 private:
  friend DenseVector create_vector(int m, std::span<std::byte> memory);
  friend DenseVector allocate_vector(int m);

  double* data_ = nullptr;
  int m_ = 0;
  std::size_t memsize_ = 0;
  std::shared_ptr<std::byte> owner_;
};

std::size_t memsize_vector(int m);
DenseVector create_vector(int m, std::span<std::byte> memory);
DenseVector allocate_vector(int m);

/// Owning column-major matrix.
class ColMatrix {
 public:
  ColMatrix() = default;
  ColMatrix(int rows, int cols) : ColMatrix(rows, cols, rows > 0 ? rows : 1) {}
  ColMatrix(int rows, int cols, int leading_dimension);

  static ColMatrix identity(int n);

  int rows() const noexcept { return m_; }
  int cols() const noexcept { return n_; }
  int leading_dimension() const noexcept { return ld_; }
  double* data() noexcept { return data_.data(); }
  const double* data() const noexcept { return data_.data(); }

  double& operator()(int i, int j) noexcept { return data_[static_cast<std::size_t>(i) + static_cast<std::size_t>(j) * ld_]; }
  double operator()(int i, int j) const noexcept {
    return data_[static_cast<std::size_t>(i) + static_cast<std::size_t>(j) * ld_];
  }

 private:
  int m_ = 0;
  int n_ = 0;
  int ld_ = 1;
  std::vector<double> data_;
};

/// A matrix operand: the matrix plus the row/column index of the top-left
/// corner of the working sub-matrix.  Converts implicitly from a matrix
/// (origin 0, 0) and from the mutable to the const form.
template <class Mat>
struct SubRef {
  Mat* mat = nullptr;
  int i = 0;
  int j = 0;

  SubRef(Mat& m, int row = 0, int col = 0) noexcept : mat(&m), i(row), j(col) {}
  template <class Other>
    requires(!std::is_same_v<Other, Mat> && std::is_convertible_v<Other*, Mat*>)
  SubRef(const SubRef<Other>& o) noexcept : mat(o.mat), i(o.i), j(o.j) {}

  Mat& operator*() const noexcept { return *mat; }
  Mat* operator->() const noexcept { return mat; }
};

using PanelRef = SubRef<PanelMatrix>;
using PanelCRef = SubRef<const PanelMatrix>;
using ColRef = SubRef<ColMatrix>;
using ColCRef = SubRef<const ColMatrix>;

/// A vector operand: vector plus the index of its first element.
template <class Vec>
struct VecSub {
  Vec* vec = nullptr;
  int i = 0;

  VecSub(Vec& v, int first = 0) noexcept : vec(&v), i(first) {}
  template <class Other>
    requires(!std::is_same_v<Other, Vec> && std::is_convertible_v<Other*, Vec*>)
  VecSub(const VecSub<Other>& o) noexcept : vec(o.vec), i(o.i) {}

  auto* ptr() const noexcept { return vec->data() + i; }
};

using VecRef = VecSub<DenseVector>;
using VecCRef = VecSub<const DenseVector>;

/// Pointer into panel-major storage at some window: `base` is the start of
/// the panel holding the window's first row, already advanced to the
/// window's first column, and `offset` is that row's position in its panel.
template <class T>
struct PanelPtr {
  T* base = nullptr;
  int sd = 0;
  int offset = 0;

  T& at(int r, int c) const noexcept {
    const int rr = offset + r;
    return base[static_cast<std::ptrdiff_t>(rr & ~(kPanelSize - 1)) * sd + c * kPanelSize +
                (rr & (kPanelSize - 1))];
  }

  /// Pointer to the window shifted by (r, c).
  PanelPtr shifted(int r, int c) const noexcept {
    const int rr = offset + r;
    return {base + static_cast<std::ptrdiff_t>(rr & ~(kPanelSize - 1)) * sd + c * kPanelSize, sd,
            rr & (kPanelSize - 1)};
  }

  operator PanelPtr<const T>() const noexcept
    requires(!std::is_const_v<T>)
  {
    return {base, sd, offset};
  }
};

using ConstPanelPtr = PanelPtr<const double>;
using MutPanelPtr = PanelPtr<double>;

inline ConstPanelPtr panel_ptr(const PanelMatrix& A, int ai, int aj) noexcept {
  const int air = ai & (kPanelSize - 1);
  return {A.data() + element_offset(ai - air, aj, kPanelSize, A.panel_length()), A.panel_length(), air};
}
inline MutPanelPtr panel_ptr(PanelMatrix& A, int ai, int aj) noexcept {
  const int air = ai & (kPanelSize - 1);
  return {A.data() + element_offset(ai - air, aj, kPanelSize, A.panel_length()), A.panel_length(), air};
}
inline ConstPanelPtr panel_ptr(PanelCRef A) noexcept { return panel_ptr(*A.mat, A.i, A.j); }
inline MutPanelPtr panel_ptr(PanelRef A) noexcept { return panel_ptr(*A.mat, A.i, A.j); }

/// Throws std::out_of_range unless the m x n window at (ai, aj) lies inside
/// a rows x cols matrix.  `what` names the routine and operand.
void check_window(int rows, int cols, int ai, int aj, int m, int n, const char* what);
inline void check_window(const PanelMatrix& A, int ai, int aj, int m, int n, const char* what) {
  check_window(A.rows(), A.cols(), ai, aj, m, n, what);
}
inline void check_window(PanelCRef A, int m, int n, const char* what) {
  check_window(A->rows(), A->cols(), A.i, A.j, m, n, what);
}
inline void check_window(ColCRef A, int m, int n, const char* what) {
  check_window(A->rows(), A->cols(), A.i, A.j, m, n, what);
}
void check_subvector(int size, int xi, int m, const char* what);
inline void check_subvector(VecCRef x, int m, const char* what) { check_subvector(x.vec->size(), x.i, m, what); }

// Fixture text format: first line "m n", then m lines of n decimal numbers
// separated by single spaces (row-major).

ColMatrix read_fixture(std::istream& in);
ColMatrix read_fixture_file(const std::string& path);
void write_fixture(std::ostream& out, const ColMatrix& A);
void write_fixture_file(const std::string& path, const ColMatrix& A);

}  // namespace panella
