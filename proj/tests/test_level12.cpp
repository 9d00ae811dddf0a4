#include <doctest.h>

#include <cmath>

#include "panella/level12.hpp"
#include "routine_harness.hpp"

using namespace panella;
using namespace panella::test;

TEST_CASE("gemv examples") {
  ColMatrix a(2, 3);
  a(0, 0) = 1, a(0, 1) = 2, a(0, 2) = 3;
  a(1, 0) = 4, a(1, 1) = 5, a(1, 2) = 6;
  const PanelMatrix A = to_panel(a);
  const DenseVector x = to_vector({1, 1, 1}), y = to_vector({10, 20});
  DenseVector z = allocate_vector(2);
  gemv_n(2, 3, 1.0, A, x, 1.0, y, z);
  CHECK(from_vector(z) == std::vector<double>{16, 35});

  const DenseVector u = to_vector({1, -1});
  DenseVector w = allocate_vector(3);
  gemv_t(2, 3, 2.0, A, u, 0.0, w, w);
  CHECK(from_vector(w) == std::vector<double>{-6, -6, -6});

  // alpha = 0 leaves beta * y.
  gemv_n(2, 3, 0.0, A, x, 0.5, y, z);
  CHECK(from_vector(z) == std::vector<double>{5, 10});
}

TEST_CASE("symv_l reads only the lower triangle") {
  Rng rng(1);
  const ColMatrix s = random_spd(rng, 7);
  ColMatrix noisy = s;
  for (int j = 0; j < 7; ++j)
    for (int i = 0; i < j; ++i) noisy(i, j) = 1e9;
  const std::vector<double> xv = random_vector(rng, 7);
  const DenseVector x = to_vector(xv);
  DenseVector z1 = allocate_vector(7), z2 = allocate_vector(7);
  symv_l(7, 1.0, to_panel(s), x, 0.0, z1, z1);
  symv_l(7, 1.0, to_panel(noisy), x, 0.0, z2, z2);
  CHECK(from_vector(z1) == from_vector(z2));
  CHECK(max_rel(from_vector(z1), oracle::gemv_n(1.0, s, xv, 0.0, {})) <= 1e-14);
}

TEST_CASE("triangular examples") {
  ColMatrix l(2, 2);
  l(0, 0) = 2, l(1, 0) = 1, l(1, 1) = 4, l(0, 1) = 99;
  const PanelMatrix L = to_panel(l);
  const DenseVector x = to_vector({1, 2});
  DenseVector z = allocate_vector(2);
  trmv_lnn(2, L, x, z);
  CHECK(from_vector(z) == std::vector<double>{2, 9});
  trmv_lnu(2, L, x, z);
  CHECK(from_vector(z) == std::vector<double>{1, 3});
  trmv_ltn(2, L, x, z);
  CHECK(from_vector(z) == std::vector<double>{4, 8});
  trsv_lnn(2, L, to_vector({2, 9}), z);
  CHECK(from_vector(z) == std::vector<double>{1, 2});

  ColMatrix zero = ColMatrix::identity(3);
  zero(1, 1) = 0.0;
  DenseVector z3 = allocate_vector(3);
  CHECK_THROWS_AS(trsv_lnn(3, to_panel(zero), to_vector({1, 1, 1}), z3), SingularMatrixError);
  CHECK_THROWS_AS(trsv_utn(3, to_panel(zero), to_vector({1, 1, 1}), z3), SingularMatrixError);
  trsv_lnu(3, to_panel(zero), to_vector({1, 1, 1}), z3);
  CHECK(from_vector(z3) == std::vector<double>{1, 1, 1});
}

TEST_CASE("level-1 examples") {
  const DenseVector x = to_vector({1, 2, 3}), y = to_vector({4, 5, 6});
  DenseVector z = allocate_vector(3);
  axpy(3, 2.0, x, y, z);
  CHECK(from_vector(z) == std::vector<double>{6, 9, 12});
  axpby(3, 2.0, x, -1.0, y, z);
  CHECK(from_vector(z) == std::vector<double>{-2, -1, 0});
  CHECK(dot(3, x, y) == 32.0);
  CHECK(dot(0, x, y) == 0.0);
  CHECK(dot(2, {x, 1}, {y, 1}) == 28.0);
}

TEST_CASE("rotg examples") {
  const Givens g = rotg(3.0, 4.0);
  CHECK(std::fabs(g.r - 5.0) <= 1e-15);
  CHECK(std::fabs(g.c - 0.6) <= 1e-15);
  CHECK(std::fabs(g.s - 0.8) <= 1e-15);

  const Givens h = rotg(-2.0, 0.0);
  CHECK(h.r == -2.0);
  CHECK(h.c == 1.0);
  CHECK(h.s == 0.0);

  const Givens z = rotg(0.0, 0.0);
  CHECK(z.c == 1.0);
  CHECK(z.s == 0.0);
  CHECK(z.r == 0.0);

  const Givens b = rotg(1.0, -3.0);
  CHECK(b.r < 0.0);
}

TEST_CASE("property: rotg annihilates b and preserves the norm") {
  Rng rng(2);
  for (int trial = 0; trial < 500; ++trial) {
    const double a = uniform(rng, -10, 10), b = uniform(rng, -10, 10);
    const Givens g = rotg(a, b);
    REQUIRE(std::fabs(g.c * g.c + g.s * g.s - 1.0) <= 1e-15);
    REQUIRE(std::fabs(g.c * a + g.s * b - g.r) <= 1e-14 * std::fabs(g.r));
    REQUIRE(std::fabs(-g.s * a + g.c * b) <= 1e-14 * std::fabs(g.r));
    REQUIRE(std::fabs(std::fabs(g.r) - std::hypot(a, b)) <= 1e-14 * std::hypot(a, b));
  }
}

TEST_CASE("property: rotations preserve column and row norms") {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const int m = uniform_int(rng, 1, 20), n = uniform_int(rng, 2, 20);
    PanelMatrix A = to_panel(random_matrix(rng, m, n));
    const int j0 = uniform_int(rng, 0, n - 1), j1 = (j0 + uniform_int(rng, 1, n - 1)) % n;
    auto colnorm2 = [&](int a, int b) {
      double s = 0;
      for (int i = 0; i < m; ++i) s += A(i, a) * A(i, a) + A(i, b) * A(i, b);
      return s;
    };
    const double before = colnorm2(j0, j1);
    const Givens g = rotg(uniform(rng), uniform(rng));
    col_rot(m, A, 0, j0, j1, g.c, g.s);
    REQUIRE(std::fabs(colnorm2(j0, j1) - before) <= 1e-13 * std::max(1.0, before));
  }
}

TEST_CASE("property: trsv undoes trmv") {
  Rng rng(4);
  for (TrVariant v : {TrVariant::lnn, TrVariant::lnu, TrVariant::ltn, TrVariant::ltu, TrVariant::unn,
                      TrVariant::utn}) {
    for (int trial = 0; trial < 20; ++trial) {
      const int m = uniform_int(rng, 1, 40);
      const PanelMatrix A = to_panel(random_dominant(rng, m));
      const std::vector<double> xv = random_vector(rng, m);
      DenseVector y = allocate_vector(m), z = allocate_vector(m);
      trmv(v, m, A, to_vector(xv), y);
      trsv(v, m, A, y, z);
      CAPTURE(to_string(v));
      REQUIRE(max_rel(from_vector(z), xv) <= 1e-13);
    }
  }
}

TEST_CASE("property: level-1/2 routines match the oracle on sampled sizes and origins") {
  Rng rng(5);
  const auto triples = size_triples();
  for (const auto& chk : level12_checks()) {
    for (std::size_t t = 0; t < triples.size(); t += 3) {
      for (int rot = 0; rot < 4; ++rot) {
        CAPTURE(chk.name);
        CAPTURE(triples[t].m);
        CAPTURE(triples[t].n);
        CAPTURE(rot);
        REQUIRE(chk.run(rng, triples[t], {rot}) <= 1e-13);
      }
    }
  }
}

TEST_CASE("property: z may alias y") {
  Rng rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = uniform_int(rng, 1, 30), n = uniform_int(rng, 1, 30);
    const PanelMatrix A = to_panel(random_matrix(rng, m, n));
    const DenseVector x = to_vector(random_vector(rng, n));
    const std::vector<double> yv = random_vector(rng, m);
    DenseVector z = allocate_vector(m), y = to_vector(yv);
    gemv_n(m, n, 1.5, A, x, -0.5, to_vector(yv), z);
    gemv_n(m, n, 1.5, A, x, -0.5, y, y);
    REQUIRE(from_vector(z) == from_vector(y));
  }
}

TEST_CASE("vector bounds are checked") {
  PanelMatrix A = allocate_panel_matrix(4, 4);
  DenseVector x = allocate_vector(3), z = allocate_vector(4);
  CHECK_THROWS_AS(gemv_n(4, 4, 1.0, A, x, 0.0, z, z), std::out_of_range);
  CHECK_THROWS_AS(axpy(3, 1.0, {x, 1}, x, x), std::out_of_range);
  CHECK_THROWS_AS(col_rot(4, A, 0, 0, 4, 1.0, 0.0), std::out_of_range);
}
