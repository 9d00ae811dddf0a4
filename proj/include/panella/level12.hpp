#pragma once

// Level-1 and level-2 routines.  Vectors are unit stride; a VecRef names a
// vector and the index of its first element.  Outputs may be the same
// vector window as the y input, and trmv/trsv may work in place (z = x).

#include "panella/errors.hpp"
#include "panella/matstore.hpp"

namespace panella {

/// z = alpha * A * x + beta * y, A m x n.
void gemv_n(int m, int n, double alpha, PanelCRef A, VecCRef x, double beta, VecCRef y, VecRef z);
/// z = alpha * A^T * x + beta * y, A m x n (x has m entries, z has n).
void gemv_t(int m, int n, double alpha, PanelCRef A, VecCRef x, double beta, VecCRef y, VecRef z);
/// z = alpha * A * x + beta * y with A symmetric, only its lower triangle read.
void symv_l(int m, double alpha, PanelCRef A, VecCRef x, double beta, VecCRef y, VecRef z);

// Triangular multiply z = op(A) * x and solve op(A) * z = x, A m x m.
// Letters: triangle (l/u), transposition (n/t), unit diagonal (u) or not (n).
void trmv_lnn(int m, PanelCRef A, VecCRef x, VecRef z);
void trmv_lnu(int m, PanelCRef A, VecCRef x, VecRef z);
void trmv_ltn(int m, PanelCRef A, VecCRef x, VecRef z);
void trmv_ltu(int m, PanelCRef A, VecCRef x, VecRef z);
void trmv_unn(int m, PanelCRef A, VecCRef x, VecRef z);
void trmv_utn(int m, PanelCRef A, VecCRef x, VecRef z);

/// Non-unit solves throw SingularMatrixError on a zero diagonal element.
void trsv_lnn(int m, PanelCRef A, VecCRef x, VecRef z);
void trsv_lnu(int m, PanelCRef A, VecCRef x, VecRef z);
void trsv_ltn(int m, PanelCRef A, VecCRef x, VecRef z);
void trsv_ltu(int m, PanelCRef A, VecCRef x, VecRef z);
void trsv_unn(int m, PanelCRef A, VecCRef x, VecRef z);
void trsv_utn(int m, PanelCRef A, VecCRef x, VecRef z);

enum class TrVariant { lnn, lnu, ltn, ltu, unn, utn };
void trmv(TrVariant variant, int m, PanelCRef A, VecCRef x, VecRef z);
void trsv(TrVariant variant, int m, PanelCRef A, VecCRef x, VecRef z);
const char* to_string(TrVariant variant) noexcept;

/// z = alpha * x + y.
void axpy(int m, double alpha, VecCRef x, VecCRef y, VecRef z);
/// z = alpha * x + beta * y.
void axpby(int m, double alpha, VecCRef x, double beta, VecCRef y, VecRef z);
/// Sum of x[i] * y[i] in index order.
double dot(int m, VecCRef x, VecCRef y);

struct Givens {
  double c;
  double s;
  double r;
};

/// c * a + s * b = r, -s * a + c * b = 0.  r takes the sign of a when
/// |a| > |b|, else the sign of b.  rotg(0, 0) = {1, 0, 0}.
Givens rotg(double a, double b);

/// Rotates columns aj0 and aj1 over rows ai .. ai+m-1:
///   x' = c x + s y,  y' = -s x + c y  (x column aj0, y column aj1).
void col_rot(int m, PanelMatrix& A, int ai, int aj0, int aj1, double c, double s);
/// Same on rows ai0 and ai1 over columns aj .. aj+n-1.
void row_rot(int n, PanelMatrix& A, int ai0, int ai1, int aj, double c, double s);

}  // namespace panella
