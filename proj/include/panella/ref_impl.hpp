#pragma once

// Portable column-major implementation: 2 x 2 register blocks, innermost
// loop over k, scalar clean-up for odd edges, no cache blocking.

#include "panella/errors.hpp"
#include "panella/matstore.hpp"

namespace panella {

/// D = alpha * A * B + beta * C.  A is m x k, B is k x n.
void rf_gemm_nn(int m, int n, int k, double alpha, ColCRef A, ColCRef B, double beta, ColCRef C, ColRef D);
/// D = alpha * A * B^T + beta * C.  A is m x k, B is n x k.
void rf_gemm_nt(int m, int n, int k, double alpha, ColCRef A, ColCRef B, double beta, ColCRef C, ColRef D);
/// Lower Cholesky factor of the lower triangle of C; the strictly upper
/// part of D is not written.
FactorStatus rf_potrf_l(int m, ColCRef C, ColRef D);

}  // namespace panella
