#include "panella/matstore.hpp"

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <new>
#include <stdexcept>
#include <string>

namespace panella {

namespace {

std::size_t align_up(std::size_t bytes) { return (bytes + kAlignment - 1) / kAlignment * kAlignment; }

bool is_aligned(const void* p) { return reinterpret_cast<std::uintptr_t>(p) % kAlignment == 0; }

std::shared_ptr<std::byte> aligned_zeroed(std::size_t bytes) {
  if (bytes == 0) return {};
  auto* p = static_cast<std::byte*>(::operator new(bytes, std::align_val_t{kAlignment}));
  std::memset(p, 0, bytes);
  return {p, [](std::byte* q) { ::operator delete(q, std::align_val_t{kAlignment}); }};
}

void check_dims(int m, int n, const char* what) {
  if (m < 0 || n < 0) {
    throw std::invalid_argument(std::string(what) + ": negative dimension " + std::to_string(m) + "x" +
                                std::to_string(n));
  }
}

}  // namespace

std::size_t memsize_panel_matrix(int m, int n) {
  check_dims(m, n, "memsize_panel_matrix");
  const std::size_t data = static_cast<std::size_t>(round_up(m, kPanelSize)) * round_up(n, kPanelSize);
  const std::size_t diag = static_cast<std::size_t>(std::min(m, n));
  return align_up((data + diag) * sizeof(double));
}

PanelMatrix create_panel_matrix(int m, int n, std::span<std::byte> memory) {
  check_dims(m, n, "create_panel_matrix");
  const std::size_t need = memsize_panel_matrix(m, n);
  if (memory.size() < need) {
    throw std::invalid_argument("create_panel_matrix: region of " + std::to_string(memory.size()) +
                                " bytes is smaller than memsize " + std::to_string(need));
  }
  if (need > 0 && !is_aligned(memory.data())) {
    throw std::invalid_argument("create_panel_matrix: region is not aligned to " +
                                std::to_string(kAlignment) + " bytes");
  }
  PanelMatrix A;
  A.m_ = m;
  A.n_ = n;
  A.cn_ = round_up(n, kPanelSize);
  A.memsize_ = need;
  if (need > 0) {
    A.data_ = reinterpret_cast<double*>(memory.data());
    A.dinv_ = A.data_ + A.data_size();
  }
  return A;
}

PanelMatrix allocate_panel_matrix(int m, int n) {
  const std::size_t bytes = memsize_panel_matrix(m, n);
  auto owner = aligned_zeroed(bytes);
  PanelMatrix A = create_panel_matrix(m, n, {owner.get(), bytes});
  A.owner_ = std::move(owner);
  return A;
}

void check_window(int rows, int cols, int ai, int aj, int m, int n, const char* what) {
  if (m < 0 || n < 0 || ai < 0 || aj < 0 || ai > rows - m || aj > cols - n) {
    throw std::out_of_range(std::string(what) + ": window " + std::to_string(m) + "x" + std::to_string(n) +
                            " at (" + std::to_string(ai) + ", " + std::to_string(aj) + ") exceeds " +
                            std::to_string(rows) + "x" + std::to_string(cols) + " matrix");
  }
}

void check_subvector(int size, int xi, int m, const char* what) {
  if (m < 0 || xi < 0 || xi > size - m) {
    throw std::out_of_range(std::string(what) + ": sub-vector of length " + std::to_string(m) + " at " +
                            std::to_string(xi) + " exceeds vector of length " + std::to_string(size));
  }
}

double get_element(const PanelMatrix& A, int i, int j) {
  check_window(A, i, j, 1, 1, "get_element");
  return A(i, j);
}

void set_element(PanelMatrix& A, int i, int j, double value) {
  check_window(A, i, j, 1, 1, "set_element");
  A(i, j) = value;
  A.invalidate_diag_inv();
}

std::size_t memsize_vector(int m) {
  check_dims(m, 0, "memsize_vector");
  return align_up(static_cast<std::size_t>(m) * sizeof(double));
}

DenseVector create_vector(int m, std::span<std::byte> memory) {
  const std::size_t need = memsize_vector(m);
  if (memory.size() < need) {
    throw std::invalid_argument("create_vector: region of " + std::to_string(memory.size()) +
                                " bytes is smaller than memsize " + std::to_string(need));
  }
  if (need > 0 && !is_aligned(memory.data())) {
    throw std::invalid_argument("create_vector: region is not aligned to " + std::to_string(kAlignment) +
                                " bytes");
  }
  DenseVector x;
  x.m_ = m;
  x.memsize_ = need;
  if (need > 0) x.data_ = reinterpret_cast<double*>(memory.data());
  return x;
}

DenseVector allocate_vector(int m) {
  const std::size_t bytes = memsize_vector(m);
  auto owner = aligned_zeroed(bytes);
  DenseVector x = create_vector(m, {owner.get(), bytes});
  x.owner_ = std::move(owner);
  return x;
}

ColMatrix::ColMatrix(int rows, int cols, int leading_dimension) : m_(rows), n_(cols), ld_(leading_dimension) {
  check_dims(rows, cols, "ColMatrix");
  if (ld_ < std::max(rows, 1)) {
    throw std::invalid_argument("ColMatrix: leading dimension " + std::to_string(ld_) + " < rows " +
                                std::to_string(rows));
  }
  data_.assign(static_cast<std::size_t>(ld_) * cols, 0.0);
}

ColMatrix ColMatrix::identity(int n) {
  ColMatrix I(n, n);
  for (int k = 0; k < n; ++k) I(k, k) = 1.0;
  return I;
}

}  // namespace panella
