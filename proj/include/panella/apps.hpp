#pragma once

// Structured solvers for embedded optimization, written on top of the
// level-3 and level-2 routines.

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "panella/errors.hpp"
#include "panella/matstore.hpp"

namespace panella {

// ---------------------------------------------------------------------------
// Equality-constrained QP through the Schur complement.
//
//   minimize 1/2 x^T H x + g^T x  subject to  A x + b = 0
//
// with H (n x n) positive definite and A (m x n) of full row rank.

struct KktFactorization {
  int n = 0;
  int m = 0;
  PanelMatrix LH;  // n x n, chol(H)
  PanelMatrix M;   // m x n, A * LH^-T
  PanelMatrix LS;  // m x m, chol(M * M^T)
};

/// Four calls: potrf_l, trsm_rltn, syrk_ln, potrf_l.  H is read from its
/// lower triangle.  Throws FactorizationError (stage 0: H, stage 1: Schur
/// complement).
KktFactorization kkt_schur_factor(int n, int m, PanelCRef H, PanelCRef A);
/// Same factors from [H; A] stacked into one (n + m) x n matrix, factored by
/// one potrf_l_mn, then syrk_potrf_ln for the Schur complement.
KktFactorization kkt_schur_factor_fused(int n, int m, PanelCRef H, PanelCRef A);
/// Returns x (n entries) and the multipliers lambda (m entries).
void kkt_schur_solve(const KktFactorization& f, const DenseVector& g, const DenseVector& b, DenseVector& x,
                     DenseVector& lambda);

// ---------------------------------------------------------------------------
// Backward Riccati recursion.
//
// Stage n has dynamics matrices A (nx x nx), B (nx x nu), cost Q (nx x nx),
// R (nu x nu) and cross term S (nu x nx).  P_N is the terminal cost.  Each
// step computes
//   P_n = Q + A^T P A - (S^T + A^T P B) (R + B^T P B)^{-1} (S + B^T P A)
// with P = P_{n+1}, in square-root form on the stacked factor.

struct OcpDims {
  int nx = 0;
  int nu = 0;
  int N = 0;
};

/// Stage data in panel-major form.
struct RiccatiStage {
  PanelMatrix BAt;  // (nu + nx) x nx: [B^T; A^T]
  PanelMatrix RSQ;  // (nu + nx) x (nu + nx), lower: [R .; S^T Q]
};

RiccatiStage make_stage(const ColMatrix& A, const ColMatrix& B, const ColMatrix& Q, const ColMatrix& R,
                        const ColMatrix& S);

/// One step.  F receives the (nu + nx) square lower factor
///   [Lambda_n 0; L_n Lcal_n]
/// of RSQ + C C^T with C = BAt * Lnext; C is scratch ((nu + nx) x nx).
/// Lnext is the nx x nx lower factor of P_{n+1}, read through its window.
FactorStatus riccati_factor_step(int nx, int nu, const RiccatiStage& stage, PanelCRef Lnext, PanelMatrix& C,
                                 PanelMatrix& F);

struct RiccatiFactorization {
  OcpDims dims;
  std::vector<PanelMatrix> F;  // N stacked factors
  PanelMatrix LN;              // chol(P_N)

  /// Window of the nx x nx factor Lcal_n of P_n (n = N gives chol(P_N)).
  PanelCRef lcal(int n) const;
  /// P_n = Lcal_n Lcal_n^T as a column-major matrix.
  ColMatrix p(int n) const;
};

/// Runs the recursion backward over all stages.  Throws FactorizationError
/// with the stage index (N for P_N).
RiccatiFactorization riccati_factorize(const OcpDims& dims, std::span<const RiccatiStage> stages, PanelCRef PN);

/// Column-major problem data, stage by stage.
struct OcpData {
  OcpDims dims;
  std::vector<ColMatrix> A, B, Q, R, S;
  ColMatrix PN;
};

/// Text format: a header line "nx nu N", then for each stage the matrices
/// A, B, Q, R, S in the fixture format, then P_N.
OcpData read_ocp(std::istream& in);
void write_ocp(std::ostream& out, const OcpData& data);
std::vector<RiccatiStage> make_stages(const OcpData& data);

// ---------------------------------------------------------------------------
// Block-tridiagonal Cholesky.
//
// The SPD matrix has N diagonal blocks D_i and N - 1 sub-diagonal blocks
// E_i at block position (i + 1, i), all nb x nb.  Only the lower triangles
// of the D_i are read.

struct BlockTridiagFactor {
  int N = 0;
  int nb = 0;
  /// Block i: (2 nb) x nb holding [L_ii; L_{i+1,i}] (the last one nb x nb).
  std::vector<PanelMatrix> blocks;
};

BlockTridiagFactor block_tridiag_chol_factor(int N, int nb, std::span<const PanelMatrix> diag,
                                             std::span<const PanelMatrix> sub);
/// Solves K x = rhs (N * nb entries).
void block_tridiag_chol_solve(const BlockTridiagFactor& f, const DenseVector& rhs, DenseVector& x);

}  // namespace panella
