#include <cmath>
#include <functional>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "flatstrata/functionals.hpp"

using namespace flatstrata;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Internal;
}

double fact(int a) {
  double r = 1;
  for (int i = 2; i <= a; ++i) r *= i;
  return r;
}

// |int_0^u z^a (z-u)^b dz| in closed form via the Beta function
double collision_oracle(int a, int b, double u) {
  return std::pow(u, a + b + 1) * fact(a) * fact(b) / fact(a + b + 1);
}

}  // namespace

TEST_CASE("quadrature nodes and the collision period") {
  std::vector<double> x, w;
  gauss_legendre(5, x, w);
  double mass = 0, second = 0;
  for (int i = 0; i < 5; ++i) {
    mass += w[i];
    second += w[i] * x[i] * x[i];
  }
  REQUIRE(mass == Catch::Approx(2.0).epsilon(1e-13));
  REQUIRE(second == Catch::Approx(2.0 / 3.0).epsilon(1e-13));

  REQUIRE(collision_integral(1, 1, 0.5) ==
          Catch::Approx(0.125 / 6.0).epsilon(1e-12));
  for (double u : {0.1, 0.7, 2.0}) {
    REQUIRE(collision_integral(1, 1, u) ==
            Catch::Approx(u * u * u / 6.0).epsilon(1e-12));
    REQUIRE(collision_integral(2, 3, u) ==
            Catch::Approx(collision_oracle(2, 3, u)).epsilon(1e-12));
    REQUIRE(collision_integral(0, 0, u) == Catch::Approx(u).epsilon(1e-12));
    REQUIRE(collision_integral(3, 1, u) ==
            Catch::Approx(collision_oracle(3, 1, u)).epsilon(1e-12));
  }
  REQUIRE(collision_integral(1, 1, 0.0) == 0.0);
  REQUIRE(code_of([] { collision_integral(-1, 0, 1.0); }) ==
          ErrorCode::ParamOutOfRange);
}

TEST_CASE("inverse-square basis energy on flat tori") {
  Surface S(builtins::square_torus_desc());
  auto e = inv_square_basis_energy(S);
  REQUIRE(e.basis.size() == 2);
  REQUIRE(e.sum == Catch::Approx(2.0).epsilon(1e-12));
  REQUIRE(exh_m_linear(S) == Catch::Approx(2.0).epsilon(1e-12));
  REQUIRE(exh_m(S) == Catch::Approx(std::log(2.0)).epsilon(1e-12));

  // rectangle of height h: energy h + 1/h after weighting by area
  for (double h : {0.5, 1.0, 2.5}) {
    Surface R(builtins::rect_torus_desc(1.0, h));
    REQUIRE(exh_m_linear(R) == Catch::Approx(h + 1.0 / h).epsilon(1e-12));
  }
}

TEST_CASE("basis energy is scale invariant") {
  Surface S(builtins::regular_octagon_desc(1.0));
  const double base = exh_m(S);
  for (cplx lam : {cplx(2.0, 0.0), cplx(0.0, 1.0), cplx(0.3, 0.4)}) {
    Surface T = S.rescaled(lam);
    REQUIRE(exh_m(T) == Catch::Approx(base).margin(1e-8));
  }
  auto e = inv_square_basis_energy(S);
  REQUIRE(static_cast<int>(e.basis.size()) == 4);
  for (const auto& sc : e.basis) REQUIRE(sc.length() <= e.cutoff + 1e-12);
}

TEST_CASE("slit pair basis energy in closed form") {
  // basis: one slit side, two detours around the slit, two vertical loops
  for (double t : {0.1, 0.01}) {
    Surface S(builtins::slit_tori_desc(t));
    const double expect =
        2.0 * (1.0 / (t * t) + 2.0 / ((1 - t) * (1 - t)) + 2.0);
    REQUIRE(exh_m_linear(S) == Catch::Approx(expect).epsilon(1e-9));
  }
}

TEST_CASE("safety radius and chart membership for the merged pattern") {
  Surjection merge(0, {0, 0});
  SECTION("radius is set by the shortest loop once marks merge") {
    Surface S(builtins::slit_tori_desc(0.03));
    REQUIRE(R_sigma(S, merge) == Catch::Approx(0.5).epsilon(1e-9));
    REQUIRE(in_V_sigma(S, merge));
  }
  SECTION("membership boundary sits at one sixteenth") {
    REQUIRE(in_V_sigma(Surface(builtins::slit_tori_desc(0.06)), merge));
    REQUIRE(!in_V_sigma(Surface(builtins::slit_tori_desc(0.0625)), merge));
    REQUIRE(!in_V_sigma(Surface(builtins::slit_tori_desc(0.07)), merge));
  }
  SECTION("identity pattern radius is set by the mark distance") {
    Surface S(builtins::slit_tori_desc(0.03));
    auto id = Surjection::identity(0, 2);
    REQUIRE(R_sigma(S, id) == Catch::Approx(0.015).epsilon(1e-9));
    REQUIRE(in_V_sigma(S, id));  // no clashing marks
  }
  REQUIRE(code_of([&] {
            in_V_sigma(Surface(builtins::square_torus_desc()), merge);
          }) == ErrorCode::SignatureMismatch);
}

TEST_CASE("collision chart of the slit pair") {
  Surjection merge(0, {0, 0});
  const double t = 0.03;
  Surface S(builtins::slit_tori_desc(t));
  auto ch = sigma_chart(S, merge);

  REQUIRE(ch.R == Catch::Approx(0.5).epsilon(1e-9));
  REQUIRE(ch.disk_radius == Catch::Approx(1.0 / 16).epsilon(1e-9));
  REQUIRE(ch.c == Catch::Approx(1.0 / 4096).epsilon(1e-12));
  REQUIRE(ch.in_V);
  REQUIRE(ch.in_disk_rank == 1);
  REQUIRE(ch.quotient_rank == 4);

  // trapped energy: one slit side of length t
  REQUIRE(ch.in_disk_energy == Catch::Approx(t * t).epsilon(1e-9));
  const double qexpect = 2.0 / ((1 - t) * (1 - t)) + 2.0;
  REQUIRE(ch.quotient_sum == Catch::Approx(qexpect).epsilon(1e-9));
  REQUIRE(ch.eta == Catch::Approx(2.0 * qexpect).epsilon(1e-9));
  REQUIRE(ch.zeta == Catch::Approx(t * t * qexpect).epsilon(1e-9));

  // at this separation the collision energy already exceeds the domain
  REQUIRE(!ch.in_U());
  REQUIRE(code_of([&] { exh_sigma(S, merge); }) == ErrorCode::ZetaOutOfDomain);
}

TEST_CASE("chart domain boundary in the slit family") {
  Surjection merge(0, {0, 0});
  // zeta crosses c = 1/4096 near t = 0.0078
  {
    auto ch = sigma_chart(Surface(builtins::slit_tori_desc(0.0076)), merge);
    REQUIRE(ch.in_U());
  }
  {
    auto ch = sigma_chart(Surface(builtins::slit_tori_desc(0.0080)), merge);
    REQUIRE(!ch.in_U());
  }
  // where membership in V is lost, the collision energy has long since
  // saturated the domain constant, so the reshaped term has already blown up
  {
    auto ch = sigma_chart(Surface(builtins::slit_tori_desc(0.0625)), merge);
    REQUIRE(ch.zeta >= 0.9 * ch.c);
  }
}

TEST_CASE("per-pattern exhaustion values") {
  Surjection merge(0, {0, 0});
  auto id = Surjection::identity(0, 2);
  const double t = 0.004;
  Surface S(builtins::slit_tori_desc(t));

  // identity pattern has no trapped segments: eta recovers the basic energy
  auto chid = sigma_chart(S, id);
  REQUIRE(chid.in_disk_rank == 0);
  REQUIRE(chid.zeta == 0.0);
  REQUIRE(chid.eta == Catch::Approx(exh_m_linear(S)).epsilon(1e-9));
  REQUIRE(exh_sigma(S, id) ==
          Catch::Approx(std::log(chid.eta + 1.0)).epsilon(1e-9));

  auto ch = sigma_chart(S, merge);
  REQUIRE(ch.in_U());
  REQUIRE(exh_sigma(S, merge) ==
          Catch::Approx(std::log(ch.eta + ch.c / (ch.c - ch.zeta)))
              .epsilon(1e-9));

  // outside V the strict variant refuses; the unrestricted formula still
  // evaluates there because nothing is trapped in the shrunken disks
  Surface far(builtins::slit_tori_desc(0.07));
  REQUIRE(code_of([&] { exh_sigma(far, merge, Config{}, true); }) ==
          ErrorCode::NotInCover);
  auto chfar = sigma_chart(far, merge);
  REQUIRE(chfar.in_disk_rank == 0);
  REQUIRE(chfar.zeta == 0.0);
  REQUIRE_NOTHROW(exh_sigma(far, merge));
}

TEST_CASE("chain sums") {
  Surjection merge(0, {0, 0});
  auto id = Surjection::identity(0, 2);
  const double t = 0.004;
  Surface S(builtins::slit_tori_desc(t));

  const double sum = exh_chain(S, {id, merge});
  REQUIRE(sum == Catch::Approx(exh_sigma(S, id) + exh_sigma(S, merge))
                     .epsilon(1e-9));
  REQUIRE(exh_chain(S, {id}) == Catch::Approx(exh_sigma(S, id)).epsilon(1e-12));

  REQUIRE(code_of([&] { exh_chain(S, {merge, id}); }) ==
          ErrorCode::ChainNotDecreasing);
  REQUIRE(code_of([&] { exh_chain(S, {id, id}); }) ==
          ErrorCode::ChainNotDecreasing);
  REQUIRE(code_of([&] { exh_chain(S, {id, merge, id}); }) ==
          ErrorCode::ChainTooDeep);
  REQUIRE(code_of([&] { exh_chain(S, {}); }) == ErrorCode::ParamOutOfRange);
}

TEST_CASE("incomparable charts never both contain the surface") {
  for (double t : {0.01, 0.3}) {
    Surface S(builtins::mark_regular_vertex(builtins::slit_tori_desc(t), 0, 5));
    REQUIRE(S.signature().n == 1);
    auto probe = cover_adaptedness_probe(S);
    REQUIRE(probe.pairs == 10);
    REQUIRE(probe.incomparable == 3);
    REQUIRE(probe.violations == 0);
  }
}
