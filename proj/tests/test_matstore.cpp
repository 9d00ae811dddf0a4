#include <doctest.h>

#include <cstring>
#include <set>
#include <sstream>
#include <vector>

#include "panella/matstore.hpp"
#include "support.hpp"

using namespace panella;

TEST_CASE("element_offset examples") {
  CHECK(element_offset(0, 0, 4, 8) == 0);
  CHECK(element_offset(6, 3, 4, 8) == 46);
  CHECK(element_offset(4, 0, 4, 8) == 32);
}

TEST_CASE("memsize examples") {
  CHECK(memsize_panel_matrix(0, 0) == 0);
  CHECK(memsize_panel_matrix(4, 4) == 192);
  CHECK(memsize_panel_matrix(5, 3) == 320);
  CHECK(memsize_vector(0) == 0);
  CHECK(memsize_vector(3) == 64);
  CHECK(memsize_vector(9) == 128);
}

TEST_CASE("memsize is a multiple of the alignment") {
  for (int m = 0; m <= 40; ++m)
    for (int n = 0; n <= 40; ++n) REQUIRE(memsize_panel_matrix(m, n) % kAlignment == 0);
}

TEST_CASE("create_panel_matrix shapes") {
  alignas(64) std::byte buf[4096];
  const PanelMatrix a = create_panel_matrix(2, 2, {buf, sizeof buf});
  CHECK(a.rows() == 2);
  CHECK(a.cols() == 2);
  CHECK(a.panel_length() == 4);

  const PanelMatrix e = create_panel_matrix(0, 0, {});
  CHECK(e.memsize() == 0);
  CHECK(e.rows() == 0);

  std::vector<std::byte> big(memsize_panel_matrix(12, 12) + 64);
  void* p = big.data();
  std::size_t space = big.size();
  std::align(64, memsize_panel_matrix(12, 12), p, space);
  const PanelMatrix c = create_panel_matrix(12, 12, {static_cast<std::byte*>(p), memsize_panel_matrix(12, 12)});
  CHECK(c.panel_count() == 3);
  CHECK(c.panel_length() == 12);
  CHECK(c.data_size() == 144u);
}

TEST_CASE("create_panel_matrix rejects bad regions") {
  alignas(64) std::byte buf[512];
  CHECK_THROWS_AS(create_panel_matrix(4, 4, {buf, 100}), std::invalid_argument);
  CHECK_THROWS_AS(create_panel_matrix(4, 4, {buf + 8, 256}), std::invalid_argument);
  CHECK_THROWS_AS(create_panel_matrix(-1, 4, {buf, 512}), std::invalid_argument);
  CHECK_THROWS_AS(create_vector(4, {buf + 8, 256}), std::invalid_argument);
}

TEST_CASE("create does not touch memory and reinterprets it") {
  alignas(64) std::byte buf[192];
  double vals[16];
  for (int i = 0; i < 16; ++i) vals[i] = i + 0.5;
  std::memcpy(buf, vals, sizeof vals);
  PanelMatrix a = create_panel_matrix(4, 4, {buf, sizeof buf});
  // Column j of a 4-row panel is elements 4j .. 4j+3.
  CHECK(get_element(a, 1, 2) == 9.5);
  CHECK(get_element(a, 3, 0) == 3.5);
}

TEST_CASE("allocate zero-fills") {
  const PanelMatrix a = allocate_panel_matrix(7, 5);
  for (int j = 0; j < 5; ++j)
    for (int i = 0; i < 7; ++i) REQUIRE(get_element(a, i, j) == 0.0);
  CHECK(a.panel_length() == 8);
  CHECK(reinterpret_cast<std::uintptr_t>(a.data()) % kAlignment == 0);
  const DenseVector x = allocate_vector(5);
  for (int i = 0; i < 5; ++i) CHECK(x[i] == 0.0);
}

TEST_CASE("get/set element") {
  PanelMatrix a = allocate_panel_matrix(8, 8);
  set_element(a, 0, 0, 3.5);
  CHECK(get_element(a, 0, 0) == 3.5);
  set_element(a, 6, 3, -1.0);
  CHECK(a.data()[46] == -1.0);
  CHECK(get_element(a, 5, 5) == 0.0);
  CHECK_THROWS_AS(get_element(a, 8, 0), std::out_of_range);
  CHECK_THROWS_AS(set_element(a, 0, -1, 1.0), std::out_of_range);
  try {
    (void)get_element(a, 9, 2);
  } catch (const std::out_of_range& e) {
    CHECK(std::string(e.what()).find("(9, 2)") != std::string::npos);
  }
}

TEST_CASE("property: offsets are injective, in bounds and contiguous per panel column") {
  test::Rng rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const int m = test::uniform_int(rng, 1, 30);
    const int n = test::uniform_int(rng, 1, 30);
    const PanelMatrix a = allocate_panel_matrix(m, n);
    std::set<std::ptrdiff_t> seen;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < m; ++i) {
        const auto off = element_offset(i, j, kPanelSize, a.panel_length());
        REQUIRE(off >= 0);
        REQUIRE(static_cast<std::size_t>(off) < a.data_size());
        REQUIRE(seen.insert(off).second);
        if (i % kPanelSize != 0) REQUIRE(off == element_offset(i - 1, j, kPanelSize, a.panel_length()) + 1);
      }
  }
}

TEST_CASE("window checks") {
  const PanelMatrix a = allocate_panel_matrix(5, 6);
  CHECK_NOTHROW(check_window(a, 1, 2, 4, 4, "t"));
  CHECK_NOTHROW(check_window(a, 5, 6, 0, 0, "t"));
  CHECK_THROWS_AS(check_window(a, 2, 0, 4, 1, "t"), std::out_of_range);
  CHECK_THROWS_AS(check_window(a, 0, 3, 1, 4, "t"), std::out_of_range);
  CHECK_THROWS_AS(check_subvector(4, 2, 3, "t"), std::out_of_range);
}

TEST_CASE("fixture roundtrip") {
  test::Rng rng(3);
  const ColMatrix A = test::random_matrix(rng, 3, 5);
  std::stringstream ss;
  write_fixture(ss, A);
  const ColMatrix B = read_fixture(ss);
  CHECK(test::bit_equal(A, B));

  std::istringstream in("2 2\n1 2\n3 4\n");
  const ColMatrix C = read_fixture(in);
  CHECK(C(0, 1) == 2.0);
  CHECK(C(1, 0) == 3.0);

  std::istringstream bad("2 2\n1 2\n3\n");
  CHECK_THROWS(read_fixture(bad));
  std::istringstream empty("0 0\n");
  CHECK(read_fixture(empty).rows() == 0);
}
