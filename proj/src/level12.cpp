#include "panella/level12.hpp"

#include <cmath>

#include "tiling.hpp"

namespace panella {

namespace {

constexpr int ps = kPanelSize;

void check_gemv(int m, int n, PanelCRef A, VecCRef x, int nx, VecCRef y, VecRef z, int nz, const char* what) {
  check_window(A, m, n, what);
  check_subvector(x, nx, what);
  check_subvector(y, nz, what);
  check_subvector(z, nz, what);
}

double combine(double alpha, double s, double beta, const double* y, int i) {
  return beta == 0.0 ? alpha * s : alpha * s + beta * y[i];
}

}  // namespace

void gemv_n(int m, int n, double alpha, PanelCRef A, VecCRef x, double beta, VecCRef y, VecRef z) {
  check_gemv(m, n, A, x, n, y, z, m, "gemv_n");
  const auto a = panel_ptr(A);
  const double* px = x.ptr();
  const double* py = y.ptr();
  double* pz = z.ptr();
  for (int i = 0; i < m; ++i) {
    const double* row = &a.at(i, 0);
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += row[j * ps] * px[j];
    pz[i] = combine(alpha, s, beta, py, i);
  }
}

void gemv_t(int m, int n, double alpha, PanelCRef A, VecCRef x, double beta, VecCRef y, VecRef z) {
  check_gemv(m, n, A, x, m, y, z, n, "gemv_t");
  const auto a = panel_ptr(A);
  const double* px = x.ptr();
  const double* py = y.ptr();
  double* pz = z.ptr();
  for (int j = 0; j < n; ++j) {
    double s = 0.0;
    for (int i = 0; i < m; ++i) s += a.at(i, j) * px[i];
    pz[j] = combine(alpha, s, beta, py, j);
  }
}

void symv_l(int m, double alpha, PanelCRef A, VecCRef x, double beta, VecCRef y, VecRef z) {
  check_gemv(m, m, A, x, m, y, z, m, "symv_l");
  const auto a = panel_ptr(A);
  const double* px = x.ptr();
  const double* py = y.ptr();
  double* pz = z.ptr();
  for (int i = 0; i < m; ++i) {
    double s = 0.0;
    for (int j = 0; j <= i; ++j) s += a.at(i, j) * px[j];
    for (int j = i + 1; j < m; ++j) s += a.at(j, i) * px[j];
    pz[i] = combine(alpha, s, beta, py, i);
  }
}

namespace {

struct TriShape {
  bool lower;      // stored triangle
  bool transpose;  // op(A) = A^T
  bool unit;
};

TriShape shape_of(TrVariant v) {
  switch (v) {
    case TrVariant::lnn:
      return {true, false, false};
    case TrVariant::lnu:
      return {true, false, true};
    case TrVariant::ltn:
      return {true, true, false};
    case TrVariant::ltu:
      return {true, true, true};
    case TrVariant::unn:
      return {false, false, false};
    case TrVariant::utn:
      return {false, true, false};
  }
  return {true, false, false};
}

// op(A) is lower triangular exactly when (lower != transpose).
bool op_lower(const TriShape& t) { return t.lower != t.transpose; }

// Element (i, j) of op(A), only called inside op(A)'s triangle.
double op_at(ConstPanelPtr a, const TriShape& t, int i, int j) { return t.transpose ? a.at(j, i) : a.at(i, j); }

void check_tr(int m, PanelCRef A, VecCRef x, VecRef z, const char* what) {
  check_window(A, m, m, what);
  check_subvector(x, m, what);
  check_subvector(z, m, what);
}

void tr_multiply(TrVariant v, int m, PanelCRef A, VecCRef x, VecRef z) {
  check_tr(m, A, x, z, "trmv");
  const TriShape t = shape_of(v);
  const auto a = panel_ptr(A);
  const double* px = x.ptr();
  double* pz = z.ptr();
  // Visit rows so that each x entry is consumed before z overwrites it.
  auto row = [&](int i) {
    double s = t.unit ? px[i] : op_at(a, t, i, i) * px[i];
    if (op_lower(t)) {
      for (int j = 0; j < i; ++j) s += op_at(a, t, i, j) * px[j];
    } else {
      for (int j = i + 1; j < m; ++j) s += op_at(a, t, i, j) * px[j];
    }
    pz[i] = s;
  };
  if (op_lower(t)) {
    for (int i = m - 1; i >= 0; --i) row(i);
  } else {
    for (int i = 0; i < m; ++i) row(i);
  }
}

void tr_solve(TrVariant v, int m, PanelCRef A, VecCRef x, VecRef z) {
  check_tr(m, A, x, z, "trsv");
  const TriShape t = shape_of(v);
  const detail::InverseDiagonal inv(A, t.unit ? 0 : m, "trsv");
  const auto a = panel_ptr(A);
  const double* px = x.ptr();
  double* pz = z.ptr();
  if (pz != px)
    for (int i = 0; i < m; ++i) pz[i] = px[i];
  auto row = [&](int i, int j0, int j1) {
    double s = pz[i];
    for (int j = j0; j < j1; ++j) s -= op_at(a, t, i, j) * pz[j];
    pz[i] = t.unit ? s : s * inv.data()[i];
  };
  if (op_lower(t)) {
    for (int i = 0; i < m; ++i) row(i, 0, i);
  } else {
    for (int i = m - 1; i >= 0; --i) row(i, i + 1, m);
  }
}

}  // namespace

void trmv(TrVariant variant, int m, PanelCRef A, VecCRef x, VecRef z) { tr_multiply(variant, m, A, x, z); }
void trsv(TrVariant variant, int m, PanelCRef A, VecCRef x, VecRef z) { tr_solve(variant, m, A, x, z); }

void trmv_lnn(int m, PanelCRef A, VecCRef x, VecRef z) { tr_multiply(TrVariant::lnn, m, A, x, z); }
void trmv_lnu(int m, PanelCRef A, VecCRef x, VecRef z) { tr_multiply(TrVariant::lnu, m, A, x, z); }
void trmv_ltn(int m, PanelCRef A, VecCRef x, VecRef z) { tr_multiply(TrVariant::ltn, m, A, x, z); }
void trmv_ltu(int m, PanelCRef A, VecCRef x, VecRef z) { tr_multiply(TrVariant::ltu, m, A, x, z); }
void trmv_unn(int m, PanelCRef A, VecCRef x, VecRef z) { tr_multiply(TrVariant::unn, m, A, x, z); }
void trmv_utn(int m, PanelCRef A, VecCRef x, VecRef z) { tr_multiply(TrVariant::utn, m, A, x, z); }

void trsv_lnn(int m, PanelCRef A, VecCRef x, VecRef z) { tr_solve(TrVariant::lnn, m, A, x, z); }
void trsv_lnu(int m, PanelCRef A, VecCRef x, VecRef z) { tr_solve(TrVariant::lnu, m, A, x, z); }
void trsv_ltn(int m, PanelCRef A, VecCRef x, VecRef z) { tr_solve(TrVariant::ltn, m, A, x, z); }
void trsv_ltu(int m, PanelCRef A, VecCRef x, VecRef z) { tr_solve(TrVariant::ltu, m, A, x, z); }
void trsv_unn(int m, PanelCRef A, VecCRef x, VecRef z) { tr_solve(TrVariant::unn, m, A, x, z); }
void trsv_utn(int m, PanelCRef A, VecCRef x, VecRef z) { tr_solve(TrVariant::utn, m, A, x, z); }

const char* to_string(TrVariant variant) noexcept {
  switch (variant) {
    case TrVariant::lnn:
      return "lnn";
    case TrVariant::lnu:
      return "lnu";
    case TrVariant::ltn:
      return "ltn";
    case TrVariant::ltu:
      return "ltu";
    case TrVariant::unn:
      return "unn";
    case TrVariant::utn:
      return "utn";
  }
  return "?";
}

void axpy(int m, double alpha, VecCRef x, VecCRef y, VecRef z) {
  check_subvector(x, m, "axpy: x");
  check_subvector(y, m, "axpy: y");
  check_subvector(z, m, "axpy: z");
  const double* px = x.ptr();
  const double* py = y.ptr();
  double* pz = z.ptr();
  for (int i = 0; i < m; ++i) pz[i] = alpha * px[i] + py[i];
}

void axpby(int m, double alpha, VecCRef x, double beta, VecCRef y, VecRef z) {
  check_subvector(x, m, "axpby: x");
  check_subvector(y, m, "axpby: y");
  check_subvector(z, m, "axpby: z");
  const double* px = x.ptr();
  const double* py = y.ptr();
  double* pz = z.ptr();
  for (int i = 0; i < m; ++i) pz[i] = alpha * px[i] + beta * py[i];
}

double dot(int m, VecCRef x, VecCRef y) {
  check_subvector(x, m, "dot: x");
  check_subvector(y, m, "dot: y");
  const double* px = x.ptr();
  const double* py = y.ptr();
  double s = 0.0;
  for (int i = 0; i < m; ++i) s += px[i] * py[i];
  return s;
}

Givens rotg(double a, double b) {
  if (b == 0.0) return {1.0, 0.0, a};
  if (a == 0.0) return {0.0, 1.0, b};
  const double sign = std::fabs(a) > std::fabs(b) ? std::copysign(1.0, a) : std::copysign(1.0, b);
  const double r = sign * std::hypot(a, b);
  return {a / r, b / r, r};
}

void col_rot(int m, PanelMatrix& A, int ai, int aj0, int aj1, double c, double s) {
  check_window(A, ai, aj0, m, 1, "col_rot: first column");
  check_window(A, ai, aj1, m, 1, "col_rot: second column");
  A.invalidate_diag_inv();
  const auto x = panel_ptr(A, ai, aj0);
  const auto y = panel_ptr(A, ai, aj1);
  for (int i = 0; i < m; ++i) {
    const double xi = x.at(i, 0);
    const double yi = y.at(i, 0);
    x.at(i, 0) = c * xi + s * yi;
    y.at(i, 0) = -s * xi + c * yi;
  }
}

void row_rot(int n, PanelMatrix& A, int ai0, int ai1, int aj, double c, double s) {
  check_window(A, ai0, aj, 1, n, "row_rot: first row");
  check_window(A, ai1, aj, 1, n, "row_rot: second row");
  A.invalidate_diag_inv();
  double* x = &panel_ptr(A, ai0, aj).at(0, 0);
  double* y = &panel_ptr(A, ai1, aj).at(0, 0);
  for (int j = 0; j < n; ++j) {
    const double xj = x[j * ps];
    const double yj = y[j * ps];
    x[j * ps] = c * xj + s * yj;
    y[j * ps] = -s * xj + c * yj;
  }
}

}  // namespace panella
