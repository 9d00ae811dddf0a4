#include <doctest.h>

#include <cmath>

#include "kernel_harness.hpp"

using namespace panella;
using namespace panella::test;

namespace {

constexpr double kTol = 1e-13;

PanelMatrix zeros(int m, int n) { return allocate_panel_matrix(m, n); }

}  // namespace

TEST_CASE("gemm_nt kernel examples") {
  Rng rng(1);
  const PanelMatrix A = to_panel(random_matrix(rng, 4, 0));
  const PanelMatrix C = to_panel(random_matrix(rng, 4, 4));
  PanelMatrix D = zeros(4, 4);
  kernel::gemm_nt<4>(0, 1.0, panel_ptr(A, 0, 0), panel_ptr(A, 0, 0), 1.0, panel_ptr(C, 0, 0), panel_ptr(D, 0, 0),
                     StoreSpec::nominal(4));
  CHECK(bit_equal(to_col(D), to_col(C)));

  const PanelMatrix I = to_panel(ColMatrix::identity(4));
  kernel::gemm_nt<4>(4, 1.0, panel_ptr(I, 0, 0), panel_ptr(I, 0, 0), 0.0, panel_ptr(C, 0, 0), panel_ptr(D, 0, 0),
                     StoreSpec::nominal(4));
  CHECK(bit_equal(to_col(D), ColMatrix::identity(4)));

  Operands o = make_operands(rng, Kern::gemm_nt, 4, 4);
  const PanelMatrix D0 = destination(rng, 4);
  const auto r = run_kernel(Kern::gemm_nt, o, StoreSpec::nominal(4), D0);
  CHECK(stored_error(Kern::gemm_nt, r, o, StoreSpec::nominal(4)) <= 1e-14);
}

TEST_CASE("gemm_nn kernel examples") {
  Rng rng(2);
  Operands o = make_operands(rng, Kern::gemm_nn, 4, 4);
  o.B = ColMatrix::identity(4);
  const PanelMatrix D0 = destination(rng, 4);
  auto r = run_kernel(Kern::gemm_nn, o, StoreSpec::nominal(4), D0);
  ColMatrix want(4, 4);
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 4; ++i) want(i, j) = o.alpha * o.A(i, j) + o.beta * o.C(i, j);
  CHECK(oracle::max_rel_diff(stored(r, StoreSpec::nominal(4)), want) <= 1e-15);

  o.alpha = 0.0;
  r = run_kernel(Kern::gemm_nn, o, StoreSpec::nominal(4), D0);
  ColMatrix bc = o.C;
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 4; ++i) bc(i, j) *= o.beta;
  CHECK(bit_equal(stored(r, StoreSpec::nominal(4)), bc));

  Operands outer = make_operands(rng, Kern::gemm_nn, 8, 1);
  r = run_kernel(Kern::gemm_nn, outer, StoreSpec::nominal(8), destination(rng, 8));
  CHECK(stored_error(Kern::gemm_nn, r, outer, StoreSpec::nominal(8)) <= kTol);
}

TEST_CASE("trsm_nt_rl kernel examples") {
  Rng rng(3);
  Operands o = make_operands(rng, Kern::trsm_nt_rl, 4, 0);
  o.alpha = 1.0;
  o.E = ColMatrix::identity(4);
  o.inv.assign(4, 1.0);
  const PanelMatrix D0 = destination(rng, 4);
  auto r = run_kernel(Kern::trsm_nt_rl, o, StoreSpec::nominal(4), D0);
  CHECK(bit_equal(stored(r, StoreSpec::nominal(4)), o.C));

  for (int i = 0; i < 4; ++i) o.E(i, i) = 2.0;
  o.inv.assign(4, 0.5);
  r = run_kernel(Kern::trsm_nt_rl, o, StoreSpec::nominal(4), D0);
  CHECK(bit_equal(stored(r, StoreSpec::nominal(4)), oracle::add(ColMatrix(4, 4), o.C, 0.5)));

  Operands rnd = make_operands(rng, Kern::trsm_nt_rl, 4, 4);
  r = run_kernel(Kern::trsm_nt_rl, rnd, StoreSpec::nominal(4), D0);
  CHECK(stored_error(Kern::trsm_nt_rl, r, rnd, StoreSpec::nominal(4)) <= kTol);
}

TEST_CASE("potrf kernel examples") {
  Rng rng(4);
  PanelMatrix empty = zeros(4, 0);
  const PanelMatrix I = to_panel(ColMatrix::identity(4));
  PanelMatrix D = zeros(4, 4);
  double inv[4];
  int st = kernel::potrf_nt_l<4>(0, panel_ptr(empty, 0, 0), panel_ptr(empty, 0, 0), panel_ptr(I, 0, 0),
                                 panel_ptr(D, 0, 0), inv, StoreSpec::nominal(4));
  CHECK(st == -1);
  CHECK(bit_equal(to_col(D), ColMatrix::identity(4)));
  for (double x : inv) CHECK(x == 1.0);

  ColMatrix c(2, 2);
  c(0, 0) = 4;
  c(1, 0) = 2;
  c(0, 1) = 99;  // not read
  c(1, 1) = 3;
  const PanelMatrix C = to_panel(c);
  PanelMatrix D2 = zeros(2, 2);
  st = kernel::potrf_nt_l<4>(0, panel_ptr(empty, 0, 0), panel_ptr(empty, 0, 0), panel_ptr(C, 0, 0),
                             panel_ptr(D2, 0, 0), inv, StoreSpec::variable(2, 2));
  CHECK(st == -1);
  CHECK(D2(0, 0) == 2.0);
  CHECK(D2(1, 0) == 1.0);
  CHECK(D2(1, 1) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(D2(0, 1) == 0.0);
  CHECK(inv[0] == 0.5);

  const PanelMatrix Z = zeros(4, 4);
  st = kernel::potrf_nt_l<4>(0, panel_ptr(empty, 0, 0), panel_ptr(empty, 0, 0), panel_ptr(Z, 0, 0),
                             panel_ptr(D, 0, 0), inv, StoreSpec::nominal(4));
  CHECK(st == 0);
}

TEST_CASE("syrk_potrf kernel reduces to its parts") {
  Rng rng(5);
  for (int mr : {4, 8}) {
    const Operands o = make_operands(rng, Kern::syrk_potrf_nt_l, mr, 6);
    const PanelMatrix D0 = destination(rng, mr);
    const StoreSpec s = StoreSpec::nominal(mr);

    // Empty update: the fused kernel is the plain factorization.
    Operands no_update = o;
    no_update.k = 0;
    no_update.A = ColMatrix(mr, 0);
    no_update.B = ColMatrix(4, 0);
    no_update.Am = ColMatrix(mr, 0);
    no_update.Bm = ColMatrix(4, 0);
    Operands as_potrf = no_update;
    const auto fused = run_kernel(Kern::syrk_potrf_nt_l, no_update, s, D0);
    const auto plain = run_kernel(Kern::potrf_nt_l, as_potrf, s, D0);
    CHECK(bit_equal(to_col(fused.D), to_col(plain.D)));

    // Sequential composition: syrk into a temporary, then potrf with the downdate.
    const auto f = run_kernel(Kern::syrk_potrf_nt_l, o, s, D0);
    Operands sy = o;
    sy.alpha = 1.0;
    sy.beta = 1.0;
    const auto t = run_kernel(Kern::syrk_nt_l, sy, s, D0);
    Operands po = o;
    po.A = o.Am;
    po.B = o.Bm;
    po.C = stored(t, s);
    for (int j = 0; j < 4; ++j)
      for (int i = 0; i < j; ++i) po.C(i, j) = 0.0;
    const auto p = run_kernel(Kern::potrf_nt_l, po, s, D0);
    CHECK(bit_equal(to_col(f.D), to_col(p.D)));
    CHECK(stored_error(Kern::syrk_potrf_nt_l, f, o, s) <= kTol);
  }
}

TEST_CASE("trmm kernel with identity factor") {
  Rng rng(6);
  Operands o = make_operands(rng, Kern::trmm_nn_rl, 4, 4);
  o.B = ColMatrix::identity(4);
  const auto r = run_kernel(Kern::trmm_nn_rl, o, StoreSpec::nominal(4), destination(rng, 4));
  CHECK(oracle::max_rel_diff(stored(r, StoreSpec::nominal(4)), oracle::add(ColMatrix(4, 4), o.A, o.alpha)) <= 1e-15);
}

TEST_CASE("StoreSpec invariants") {
  CHECK(StoreSpec::nominal(4).valid_for(4));
  CHECK(StoreSpec::nominal(8).valid_for(8));
  CHECK_FALSE(StoreSpec::nominal(8).valid_for(4));
  CHECK(StoreSpec::variable(3, 2).valid_for(4));
  CHECK_FALSE(StoreSpec{StoreMode::VariableSize, 3, 2, 1}.valid_for(4));
  CHECK_FALSE(StoreSpec{StoreMode::Nominal, 3, 4, 0}.valid_for(4));
  CHECK(StoreSpec::generalized(3, 8, 4).valid_for(8));
  CHECK_FALSE(StoreSpec::generalized(4, 8, 4).valid_for(8));
}

TEST_CASE("property: every kernel matches the oracle and respects its store mask") {
  Rng rng(7);
  for (Kern kind : all_kernels()) {
    for (int mr : {4, 8}) {
      for (int k = 0; k <= 16; ++k) {
        const Operands o = make_operands(rng, kind, mr, k);
        const PanelMatrix D0 = destination(rng, mr);
        const StoreSpec specs[] = {
            StoreSpec::nominal(mr),
            StoreSpec::variable(uniform_int(rng, 1, mr), uniform_int(rng, 1, 4)),
            StoreSpec::generalized(uniform_int(rng, 0, 3), uniform_int(rng, 1, mr), uniform_int(rng, 1, 4)),
        };
        for (const StoreSpec& s : specs) {
          CAPTURE(name(kind));
          CAPTURE(mr);
          CAPTURE(k);
          CAPTURE(s.m_store);
          CAPTURE(s.n_store);
          CAPTURE(s.panel_row_offset);
          const auto r = run_kernel(kind, o, s, D0);
          REQUIRE(mask_respected(kind, r, D0, s));
          REQUIRE(stored_error(kind, r, o, s) <= kTol);
          if (kind == Kern::potrf_nt_l || kind == Kern::syrk_potrf_nt_l) REQUIRE(r.status == -1);
        }
      }
    }
  }
}

TEST_CASE("property: store variants are bit-identical where they overlap") {
  Rng rng(8);
  for (Kern kind : all_kernels()) {
    for (int mr : {4, 8}) {
      for (int k = 0; k <= 16; ++k) {
        const Operands o = make_operands(rng, kind, mr, k);
        const PanelMatrix D0 = destination(rng, mr);
        const auto nominal = run_kernel(kind, o, StoreSpec::nominal(mr), D0);
        const auto variable = run_kernel(kind, o, StoreSpec::variable(mr, 4), D0);
        const auto general = run_kernel(kind, o, StoreSpec::generalized(0, mr, 4), D0);
        CAPTURE(name(kind));
        CAPTURE(mr);
        CAPTURE(k);
        REQUIRE(bit_equal(to_col(nominal.D), to_col(variable.D)));
        REQUIRE(bit_equal(to_col(variable.D), to_col(general.D)));

        // Masked and shifted stores carry the same values as the full block,
        // except for the backward solves whose truncated systems differ.
        if (kind == Kern::trsm_nn_lu || kind == Kern::trsm_nt_ru) continue;
        const int m = uniform_int(rng, 1, mr), n = uniform_int(rng, 1, 4);
        const StoreSpec g = StoreSpec::generalized(uniform_int(rng, 1, 3), m, n);
        const auto shifted = run_kernel(kind, o, g, D0);
        const ColMatrix full = stored(nominal, StoreSpec::nominal(mr));
        const ColMatrix part = stored(shifted, g);
        for (int j = 0; j < n; ++j)
          for (int i = lower_store(kind) ? j : 0; i < m; ++i)
            REQUIRE(std::bit_cast<std::uint64_t>(part(i, j)) == std::bit_cast<std::uint64_t>(full(i, j)));
      }
    }
  }
}
