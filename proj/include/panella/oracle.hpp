#pragma once

// Textbook implementations on column-major matrices, used as ground truth
// by the tests and by the benchmark's correctness gate.  They depend only on
// ColMatrix and never call into the panel-major code.

#include <vector>

#include "panella/matstore.hpp"

namespace panella::oracle {

ColMatrix transpose(const ColMatrix& A);
/// alpha * A * B + beta * C (C may be empty when beta == 0).
ColMatrix gemm_nn(double alpha, const ColMatrix& A, const ColMatrix& B, double beta, const ColMatrix& C);
ColMatrix gemm_nt(double alpha, const ColMatrix& A, const ColMatrix& B, double beta, const ColMatrix& C);
/// Lower triangle of alpha * A * B^T + beta * C; strictly upper part zero.
ColMatrix syrk_ln(double alpha, const ColMatrix& A, const ColMatrix& B, double beta, const ColMatrix& C);
/// alpha * B * tril(A).
ColMatrix trmm_rlnn(double alpha, const ColMatrix& A, const ColMatrix& B);

/// Triangular solves, same letters as the panel routines:
/// llnu A X = alpha B, lunn, rltn X A^T = alpha B, rltu, rutn.
ColMatrix trsm(const char* variant, double alpha, const ColMatrix& A, const ColMatrix& B);

struct Cholesky {
  ColMatrix L;  // lower, zeros above
  int failed = -1;
};
/// Right-looking outer-product Cholesky of the lower triangle of C.
Cholesky potrf(const ColMatrix& C);

struct Lu {
  ColMatrix LU;
  std::vector<int> ipiv;
  int failed = -1;
};
/// Outer-product elimination; partial pivoting (largest magnitude, lowest
/// index on ties) when `pivot`.
Lu getrf(const ColMatrix& C, bool pivot);

/// L of C = L * Q with positive diagonal, via Cholesky of C * C^T.
ColMatrix lq_l(const ColMatrix& C);

std::vector<double> gemv_n(double alpha, const ColMatrix& A, const std::vector<double>& x, double beta,
                           const std::vector<double>& y);
std::vector<double> gemv_t(double alpha, const ColMatrix& A, const std::vector<double>& x, double beta,
                           const std::vector<double>& y);
/// Symmetric product from the lower triangle of A.
std::vector<double> symv_l(double alpha, const ColMatrix& A, const std::vector<double>& x, double beta,
                           const std::vector<double>& y);
/// Variants lnn lnu ltn ltu unn utn.
std::vector<double> trmv(const char* variant, const ColMatrix& A, const std::vector<double>& x);
std::vector<double> trsv(const char* variant, const ColMatrix& A, const std::vector<double>& x);
double dot(const std::vector<double>& x, const std::vector<double>& y);

/// Solution of A X = B by Gaussian elimination with partial pivoting.
ColMatrix solve(const ColMatrix& A, const ColMatrix& B);

/// One backward Riccati step (A nx x nx, B nx x nu, S nu x nx):
/// Q + A^T P A - (S^T + A^T P B) (R + B^T P B)^{-1} (S + B^T P A).
ColMatrix riccati_step(const ColMatrix& A, const ColMatrix& B, const ColMatrix& Q, const ColMatrix& R,
                       const ColMatrix& S, const ColMatrix& P);

ColMatrix add(const ColMatrix& A, const ColMatrix& B, double beta = 1.0);
double norm_fro(const ColMatrix& A);
/// Frobenius norm of A - B.
double diff_fro(const ColMatrix& A, const ColMatrix& B);
/// Largest |A - B| divided by the largest |B| (the plain difference when B
/// is zero).  Any NaN gives infinity.
double max_rel_diff(const ColMatrix& A, const ColMatrix& B);

}  // namespace panella::oracle
