#include "panella/apps.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "panella/level12.hpp"
#include "panella/level3.hpp"
#include "panella/pack.hpp"

namespace panella {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

void check_factor(FactorStatus st, const char* what, int stage) {
  if (!st.ok()) throw FactorizationError(what, stage, st.failed_index);
}

}  // namespace

// ---------------------------------------------------------------------------
// KKT

namespace {

KktFactorization start_kkt(int n, int m, PanelCRef H, PanelCRef A, const char* what) {
  require(n >= 1 && m >= 0, std::string(what) + ": need n >= 1 and m >= 0");
  check_window(H, n, n, what);
  check_window(A, m, n, what);
  KktFactorization f;
  f.n = n;
  f.m = m;
  f.LH = allocate_panel_matrix(n, n);
  f.M = allocate_panel_matrix(m, n);
  f.LS = allocate_panel_matrix(m, m);
  return f;
}

}  // namespace

KktFactorization kkt_schur_factor(int n, int m, PanelCRef H, PanelCRef A) {
  KktFactorization f = start_kkt(n, m, H, A, "kkt_schur_factor");
  check_factor(potrf_l(n, H, f.LH), "kkt_schur_factor", 0);
  trsm_rltn(m, n, 1.0, f.LH, A, f.M);
  syrk_ln(m, n, 1.0, f.M, f.M, 0.0, f.LS, f.LS);
  check_factor(potrf_l(m, f.LS, f.LS), "kkt_schur_factor", 1);
  return f;
}

KktFactorization kkt_schur_factor_fused(int n, int m, PanelCRef H, PanelCRef A) {
  KktFactorization f = start_kkt(n, m, H, A, "kkt_schur_factor_fused");
  PanelMatrix stacked = allocate_panel_matrix(n + m, n);
  gecp(n, n, H, stacked);
  gecp(m, n, A, {stacked, n, 0});
  check_factor(potrf_l_mn(n + m, n, stacked, stacked), "kkt_schur_factor_fused", 0);
  // LS starts zero-filled, so it doubles as the C operand.
  check_factor(syrk_potrf_ln(m, n, {stacked, n, 0}, {stacked, n, 0}, f.LS, f.LS), "kkt_schur_factor_fused", 1);
  gecp(n, n, stacked, f.LH);
  gecp(m, n, {stacked, n, 0}, f.M);
  // Carry the reciprocal pivots over with the copy.
  for (int k = 0; k < n; ++k) f.LH.diag_inv()[k] = stacked.diag_inv()[k];
  f.LH.set_diag_inv_valid(n);
  return f;
}

void kkt_schur_solve(const KktFactorization& f, const DenseVector& g, const DenseVector& b, DenseVector& x,
                     DenseVector& lambda) {
  const int n = f.n;
  const int m = f.m;
  check_subvector(g, n, "kkt_schur_solve: g");
  check_subvector(b, m, "kkt_schur_solve: b");
  check_subvector(x, n, "kkt_schur_solve: x");
  check_subvector(lambda, m, "kkt_schur_solve: lambda");
  trsv_lnn(n, f.LH, g, x);                         // y = LH^-1 g
  gemv_n(m, n, -1.0, f.M, x, 1.0, b, lambda);       // b - M y
  trsv_lnn(m, f.LS, lambda, lambda);
  trsv_ltn(m, f.LS, lambda, lambda);
  gemv_t(m, n, 1.0, f.M, lambda, 1.0, x, x);        // y + M^T lambda
  trsv_ltn(n, f.LH, x, x);
  for (int i = 0; i < n; ++i) x[i] = -x[i];
}

// ---------------------------------------------------------------------------
// Riccati

RiccatiStage make_stage(const ColMatrix& A, const ColMatrix& B, const ColMatrix& Q, const ColMatrix& R,
                        const ColMatrix& S) {
  const int nx = A.rows();
  const int nu = B.cols();
  require(A.cols() == nx && B.rows() == nx && Q.rows() == nx && Q.cols() == nx && R.rows() == nu &&
              R.cols() == nu && S.rows() == nu && S.cols() == nx,
          "make_stage: inconsistent stage dimensions");
  RiccatiStage st;
  st.BAt = allocate_panel_matrix(nu + nx, nx);
  pack_matrix_transposed(nx, nu, B, st.BAt);
  pack_matrix_transposed(nx, nx, A, {st.BAt, nu, 0});
  st.RSQ = allocate_panel_matrix(nu + nx, nu + nx);
  pack_matrix(nu, nu, R, st.RSQ);
  pack_matrix_transposed(nu, nx, S, {st.RSQ, nu, 0});
  pack_matrix(nx, nx, Q, {st.RSQ, nu, nu});
  return st;
}

FactorStatus riccati_factor_step(int nx, int nu, const RiccatiStage& stage, PanelCRef Lnext, PanelMatrix& C,
                                 PanelMatrix& F) {
  const int nt = nu + nx;
  trmm_rlnn(nt, nx, 1.0, Lnext, stage.BAt, C);
  return syrk_potrf_ln(nt, nx, C, C, stage.RSQ, F);
}

PanelCRef RiccatiFactorization::lcal(int n) const {
  if (n < 0 || n > dims.N) throw std::out_of_range("RiccatiFactorization::lcal: stage out of range");
  if (n == dims.N) return LN;
  return {F[static_cast<std::size_t>(n)], dims.nu, dims.nu};
}

ColMatrix RiccatiFactorization::p(int n) const {
  const int nx = dims.nx;
  ColMatrix L(nx, nx);
  unpack_matrix(nx, nx, lcal(n), L);
  ColMatrix P(nx, nx);
  for (int j = 0; j < nx; ++j)
    for (int i = 0; i < nx; ++i) {
      double s = 0.0;
      for (int k = 0; k <= std::min(i, j); ++k) s += L(i, k) * L(j, k);
      P(i, j) = s;
    }
  return P;
}

RiccatiFactorization riccati_factorize(const OcpDims& dims, std::span<const RiccatiStage> stages, PanelCRef PN) {
  const int nx = dims.nx;
  const int nu = dims.nu;
  require(nx >= 1 && nu >= 0 && dims.N >= 1, "riccati_factorize: need nx >= 1, nu >= 0, N >= 1");
  require(stages.size() == static_cast<std::size_t>(dims.N), "riccati_factorize: expected N stages");
  for (const RiccatiStage& st : stages)
    require(st.BAt.rows() == nu + nx && st.BAt.cols() == nx && st.RSQ.rows() == nu + nx && st.RSQ.cols() == nu + nx,
            "riccati_factorize: stage dimensions do not match");
  RiccatiFactorization out;
  out.dims = dims;
  out.LN = allocate_panel_matrix(nx, nx);
  check_factor(potrf_l(nx, PN, out.LN), "riccati_factorize", dims.N);
  out.F.resize(static_cast<std::size_t>(dims.N));
  PanelMatrix C = allocate_panel_matrix(nu + nx, nx);
  for (int n = dims.N - 1; n >= 0; --n) {
    PanelMatrix& F = out.F[static_cast<std::size_t>(n)];
    F = allocate_panel_matrix(nu + nx, nu + nx);
    check_factor(riccati_factor_step(nx, nu, stages[static_cast<std::size_t>(n)], out.lcal(n + 1), C, F),
                 "riccati_factorize", n);
  }
  return out;
}

OcpData read_ocp(std::istream& in) {
  OcpData d;
  if (!(in >> d.dims.nx >> d.dims.nu >> d.dims.N)) throw std::runtime_error("read_ocp: missing 'nx nu N' header");
  require(d.dims.nx >= 1 && d.dims.nu >= 0 && d.dims.N >= 1, "read_ocp: invalid dimensions in header");
  auto next = [&](int rows, int cols, const char* name) {
    ColMatrix M = read_fixture(in);
    if (M.rows() != rows || M.cols() != cols)
      throw std::runtime_error(std::string("read_ocp: matrix ") + name + " has the wrong size");
    return M;
  };
  const int nx = d.dims.nx;
  const int nu = d.dims.nu;
  for (int n = 0; n < d.dims.N; ++n) {
    d.A.push_back(next(nx, nx, "A"));
    d.B.push_back(next(nx, nu, "B"));
    d.Q.push_back(next(nx, nx, "Q"));
    d.R.push_back(next(nu, nu, "R"));
    d.S.push_back(next(nu, nx, "S"));
  }
  d.PN = next(nx, nx, "P_N");
  return d;
}

void write_ocp(std::ostream& out, const OcpData& d) {
  out << d.dims.nx << ' ' << d.dims.nu << ' ' << d.dims.N << '\n';
  for (int n = 0; n < d.dims.N; ++n) {
    const auto k = static_cast<std::size_t>(n);
    write_fixture(out, d.A[k]);
    write_fixture(out, d.B[k]);
    write_fixture(out, d.Q[k]);
    write_fixture(out, d.R[k]);
    write_fixture(out, d.S[k]);
  }
  write_fixture(out, d.PN);
}

std::vector<RiccatiStage> make_stages(const OcpData& d) {
  std::vector<RiccatiStage> st;
  st.reserve(static_cast<std::size_t>(d.dims.N));
  for (std::size_t n = 0; n < static_cast<std::size_t>(d.dims.N); ++n)
    st.push_back(make_stage(d.A[n], d.B[n], d.Q[n], d.R[n], d.S[n]));
  return st;
}

// ---------------------------------------------------------------------------
// Block-tridiagonal Cholesky

BlockTridiagFactor block_tridiag_chol_factor(int N, int nb, std::span<const PanelMatrix> diag,
                                             std::span<const PanelMatrix> sub) {
  require(N >= 1 && nb >= 1, "block_tridiag_chol_factor: need N >= 1 and nb >= 1");
  require(diag.size() == static_cast<std::size_t>(N) && sub.size() == static_cast<std::size_t>(N - 1),
          "block_tridiag_chol_factor: expected N diagonal and N - 1 sub-diagonal blocks");
  BlockTridiagFactor f;
  f.N = N;
  f.nb = nb;
  f.blocks.reserve(static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i) f.blocks.push_back(allocate_panel_matrix(i + 1 < N ? 2 * nb : nb, nb));
  gecp(nb, nb, diag[0], f.blocks[0]);
  for (int i = 0; i < N; ++i) {
    const auto k = static_cast<std::size_t>(i);
    PanelMatrix& blk = f.blocks[k];
    const bool last = i + 1 == N;
    if (!last) gecp(nb, nb, sub[k], {blk, nb, 0});
    check_factor(potrf_l_mn(blk.rows(), nb, blk, blk), "block_tridiag_chol_factor", i);
    // D_{i+1} - L_{i+1,i} L_{i+1,i}^T into the next block's top.
    if (!last) syrk_ln(nb, nb, -1.0, {blk, nb, 0}, {blk, nb, 0}, 1.0, diag[k + 1], f.blocks[k + 1]);
  }
  return f;
}

void block_tridiag_chol_solve(const BlockTridiagFactor& f, const DenseVector& rhs, DenseVector& x) {
  const int nb = f.nb;
  const int total = f.N * nb;
  check_subvector(rhs, total, "block_tridiag_chol_solve: rhs");
  check_subvector(x, total, "block_tridiag_chol_solve: x");
  if (x.data() != rhs.data())
    for (int i = 0; i < total; ++i) x[i] = rhs[i];
  for (int i = 0; i < f.N; ++i) {
    const PanelMatrix& blk = f.blocks[static_cast<std::size_t>(i)];
    if (i > 0)
      gemv_n(nb, nb, -1.0, {f.blocks[static_cast<std::size_t>(i - 1)], nb, 0}, {x, (i - 1) * nb}, 1.0, {x, i * nb},
             {x, i * nb});
    trsv_lnn(nb, blk, {x, i * nb}, {x, i * nb});
  }
  for (int i = f.N - 1; i >= 0; --i) {
    const PanelMatrix& blk = f.blocks[static_cast<std::size_t>(i)];
    if (i + 1 < f.N) gemv_t(nb, nb, -1.0, {blk, nb, 0}, {x, (i + 1) * nb}, 1.0, {x, i * nb}, {x, i * nb});
    trsv_ltn(nb, blk, {x, i * nb}, {x, i * nb});
  }
}

}  // namespace panella
