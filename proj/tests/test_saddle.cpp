#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <set>

#include "flatstrata/saddle.hpp"
#include "flatstrata/surface.hpp"

using namespace flatstrata;

namespace {

// Independent oracle for the square torus: saddle connections are exactly the
// primitive integer vectors (imprimitive ones pass through the marked point).
int primitive_vectors_within(double L) {
  int count = 0;
  const int R = static_cast<int>(std::floor(L)) + 1;
  for (int p = -R; p <= R; ++p)
    for (int q = -R; q <= R; ++q) {
      if (p == 0 && q == 0) continue;
      if (std::gcd(std::abs(p), std::abs(q)) != 1) continue;
      if (p * p + q * q <= L * L + 1e-12) ++count;
    }
  return count;
}

}  // namespace

TEST_CASE("square torus connection counts match the lattice oracle") {
  Surface S(builtins::square_torus_desc());
  CHECK(enumerate_saddles(S, 1.0).size() == 4);
  CHECK(enumerate_saddles(S, 1.5).size() == 8);
  CHECK(enumerate_saddles(S, 2.3).size() == 16);
  for (double L : {1.0, 1.5, 2.3, 3.7, 5.0}) {
    const auto conns = enumerate_saddles(S, L);
    CHECK(static_cast<int>(conns.size()) == primitive_vectors_within(L));
    for (const auto& sc : conns) {
      CHECK(std::abs(sc.holonomy.real() -
                     std::round(sc.holonomy.real())) < 1e-9);
      CHECK(std::abs(sc.holonomy.imag() -
                     std::round(sc.holonomy.imag())) < 1e-9);
      const int p = static_cast<int>(std::round(sc.holonomy.real()));
      const int q = static_cast<int>(std::round(sc.holonomy.imag()));
      CHECK(std::gcd(std::abs(p), std::abs(q)) == 1);
    }
  }
}

TEST_CASE("square torus enumeration is sorted and deduplicated") {
  Surface S(builtins::square_torus_desc());
  const auto conns = enumerate_saddles(S, 3.0);
  for (std::size_t i = 1; i < conns.size(); ++i)
    CHECK(conns[i - 1].length() <= conns[i].length() + 1e-12);
  std::set<std::pair<long, long>> seen;
  for (const auto& sc : conns) {
    auto key = std::make_pair(std::lround(sc.holonomy.real() * 1024),
                              std::lround(sc.holonomy.imag() * 1024));
    CHECK(seen.insert(key).second);
  }
}

TEST_CASE("octagon systole and short diagonal") {
  Surface S(builtins::regular_octagon_desc(1.0));
  CHECK(systole(S) == Catch::Approx(1.0).epsilon(1e-12));
  const auto conns = enumerate_saddles(S, 2.0);
  const double diag = std::sqrt(2.0 + std::sqrt(2.0));
  bool has_side = false, has_diag = false;
  for (const auto& sc : conns) {
    if (std::abs(sc.length() - 1.0) < 1e-9) has_side = true;
    if (std::abs(sc.length() - diag) < 1e-9) has_diag = true;
  }
  CHECK(has_side);
  CHECK(has_diag);
}

TEST_CASE("holonomy scales with the surface") {
  Surface S(builtins::regular_octagon_desc(1.0));
  const auto base = enumerate_saddles(S, 2.0);
  for (cplx lambda : {cplx(2.0, 0.0), cplx(0.0, 1.0), cplx(0.3, 0.4)}) {
    Surface T = S.rescaled(lambda);
    const auto scaled = enumerate_saddles(T, 2.0 * std::abs(lambda));
    REQUIRE(scaled.size() == base.size());
    for (std::size_t i = 0; i < base.size(); ++i)
      CHECK(std::abs(std::abs(scaled[i].holonomy) -
                     std::abs(lambda * base[i].holonomy)) < 1e-9);
  }
}

TEST_CASE("slit pair short connections") {
  const double t = 0.1;
  Surface S(builtins::slit_tori_desc(t));
  CHECK(systole(S) == Catch::Approx(t).epsilon(1e-9));

  // below the next scale the only connections are the two sides of the slit,
  // each in both orientations
  const auto short_conns = enumerate_saddles(S, 0.5);
  REQUIRE(short_conns.size() == 4);
  for (const auto& sc : short_conns) {
    CHECK(sc.length() == Catch::Approx(t).epsilon(1e-9));
    CHECK(sc.start_mark != sc.end_mark);
  }

  // at the next scale: two parallel twins per direction through the tori
  const auto conns = enumerate_saddles(S, 0.95);
  int twins = 0;
  for (const auto& sc : conns)
    if (std::abs(sc.length() - (1.0 - t)) < 1e-9) ++twins;
  CHECK(twins == 4);

  CHECK(marked_distance(S, 0, 1) == Catch::Approx(t).epsilon(1e-9));
  CHECK(marked_distance(S, 0, 0) == 0.0);
  CHECK(marked_distance(S, 1, 0) == Catch::Approx(t).epsilon(1e-9));
}

TEST_CASE("homology class of a connection reproduces its holonomy") {
  for (const char* fam : {"square_torus", "regular_octagon", "slit_tori"}) {
    std::vector<double> params;
    if (fam == std::string("regular_octagon")) params = {1.0};
    if (fam == std::string("slit_tori")) params = {0.3};
    Surface S(builtins::make(fam, params));
    PeriodChart chart(S);
    const Eigen::VectorXcd P = chart.periods();
    const auto conns = enumerate_saddles(S, 1.6);
    REQUIRE(!conns.empty());
    for (const auto& sc : conns) {
      const Eigen::VectorXd c = connection_coords(chart, sc);
      cplx acc = 0;
      for (int a = 0; a < chart.rank(); ++a) acc += c(a) * P(a);
      CHECK(std::abs(acc - sc.holonomy) < 1e-8);
    }
  }
}

TEST_CASE("torus connection classes form a unimodular pair") {
  Surface S(builtins::square_torus_desc());
  PeriodChart chart(S);
  const auto conns = enumerate_saddles(S, 1.0);
  REQUIRE(conns.size() == 4);
  Eigen::MatrixXd M(2, 2);
  int row = 0;
  Eigen::VectorXd cx, cy;
  for (const auto& sc : conns) {
    if (std::abs(sc.holonomy - cplx(1, 0)) < 1e-9) cx = connection_coords(chart, sc);
    if (std::abs(sc.holonomy - cplx(0, 1)) < 1e-9) cy = connection_coords(chart, sc);
  }
  REQUIRE(cx.size() == 2);
  REQUIRE(cy.size() == 2);
  M.row(0) = cx;
  M.row(1) = cy;
  CHECK(std::abs(std::abs(M.determinant()) - 1.0) < 1e-9);
  (void)row;

  // the diagonal is homologous to the sum of the sides
  for (const auto& sc : enumerate_saddles(S, 1.5))
    if (std::abs(sc.holonomy - cplx(1, 1)) < 1e-9) {
      const Eigen::VectorXd cd = connection_coords(chart, sc);
      CHECK((cd - cx - cy).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("disk containment of developed segments") {
  const double t = 0.1;
  Surface S(builtins::slit_tori_desc(t));
  const int p1_class = S.marked_classes()[0];
  const auto conns = enumerate_saddles(S, 1.05);
  int contained_small = 0;
  for (const auto& sc : conns) {
    const bool in_disk = connection_contained_in_disk(S, sc, p1_class, 0.3);
    if (std::abs(sc.length() - t) < 1e-9) {
      CHECK(in_disk);
      ++contained_small;
      // too small a disk fails on the far endpoint
      CHECK(!connection_contained_in_disk(S, sc, p1_class, 0.06));
    } else {
      CHECK(!in_disk);
    }
  }
  CHECK(contained_small == 4);
}

TEST_CASE("shortest loop on the square torus") {
  Surface S(builtins::square_torus_desc());
  const ShortestLoop sl = shortest_loop(S);
  CHECK(sl.length == Catch::Approx(1.0).epsilon(1e-9));
  CHECK(sl.systole == Catch::Approx(1.0).epsilon(1e-9));
  CHECK(!sl.warning);
}

TEST_CASE("shortest loop on the slit pair") {
  // both realizations exist at length one: the vertical closed connection
  // through the unmarked outer vertex and the horizontal torus cores
  Surface S(builtins::slit_tori_desc(0.1));
  const ShortestLoop sl = shortest_loop(S);
  CHECK(sl.length == Catch::Approx(1.0).epsilon(1e-7));
  CHECK(sl.systole == Catch::Approx(0.1).epsilon(1e-9));
  // the loop is much longer than the systole, so a concatenated geodesic
  // could be shorter: the search flags it
  CHECK(sl.warning);
}

TEST_CASE("node budget aborts runaway searches") {
  Surface S(builtins::square_torus_desc());
  Config cfg;
  cfg.node_budget = 10;
  try {
    enumerate_saddles(S, 40.0, cfg);
    FAIL("expected budget exhaustion");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BudgetExceeded);
    CHECK(!is_validation_error(e.code()));
  }
}
