#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "flatstrata/hessian.hpp"

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

SurfaceDesc hex_torus_desc() {
  const double r3 = std::sqrt(3.0) / 2.0;
  SurfaceDesc d;
  d.polygons = {{cplx(0, 0), cplx(1, 0), cplx(1.5, r3), cplx(0.5, r3)}};
  d.gluings.push_back({{{0, 0}, {0, 2}}});
  d.gluings.push_back({{{0, 1}, {0, 3}}});
  d.marked = {{0, 0, 0, true}};
  return d;
}

}  // namespace

TEST_CASE("line fits") {
  auto f = fit_line({0, 1, 2, 3}, {1, 4, 7, 10});
  REQUIRE(f.slope == Catch::Approx(3.0).epsilon(1e-12));
  REQUIRE(f.intercept == Catch::Approx(1.0).epsilon(1e-12));
  REQUIRE(f.r2 == Catch::Approx(1.0).epsilon(1e-12));
  REQUIRE(code_of([] { fit_line({1.0}, {2.0}); }) == ErrorCode::SizeMismatch);
  REQUIRE(code_of([] { fit_line({1, 1}, {2, 3}); }) == ErrorCode::ZeroScalar);
}

TEST_CASE("area form signatures") {
  auto F = [](const Surface& T) { return T.area(); };

  Surface oct(builtins::regular_octagon_desc(1.0));
  auto ha = complex_hessian(oct, F);
  REQUIRE(ha.positive == 2);
  REQUIRE(ha.negative == 2);
  REQUIRE(ha.zero == 0);
  REQUIRE(ha.consistency < 1e-6);  // the area is exactly quadratic

  // relative period directions do not change the area
  Surface slit(builtins::slit_tori_desc(0.3));
  auto hs = complex_hessian(slit, F);
  REQUIRE(hs.positive == 2);
  REQUIRE(hs.negative == 2);
  REQUIRE(hs.zero == 1);

  // signature is scale invariant
  auto hr = complex_hessian(oct.rescaled(cplx(0.3, 0.1)), F);
  REQUIRE(hr.signature() == "(2,2,0)");
}

TEST_CASE("log area loses one positive direction to scaling") {
  Surface oct(builtins::regular_octagon_desc(1.0));
  auto h = complex_hessian(
      oct, [](const Surface& T) { return std::log(T.area()); });
  REQUIRE(h.positive == 1);
  REQUIRE(h.negative == 2);
  REQUIRE(h.zero == 1);
  REQUIRE(scaling_direction_residual(oct, h) < 1e-3);
}

TEST_CASE("inverse-square energy is strictly plurisubharmonic") {
  auto F = [](const Surface& T) { return inv_square_basis_energy(T).sum; };

  Surface rect(builtins::rect_torus_desc(1.0, 0.7));
  auto hr = complex_hessian(rect, F);
  REQUIRE(hr.positive == 2);
  REQUIRE(hr.nonpositive() == 0);

  Surface oct(builtins::regular_octagon_desc(1.0));
  auto ho = complex_hessian(oct, F);
  REQUIRE(ho.positive == 4);
  REQUIRE(ho.nonpositive() == 0);

  Surface slit(builtins::slit_tori_desc(0.1));
  auto hs = complex_hessian(slit, F);
  REQUIRE(hs.positive == 5);
  REQUIRE(hs.nonpositive() == 0);
}

TEST_CASE("exhaustion log has few nonpositive directions") {
  // the nonpositive bound is g on the projectivized stratum, so the scaling
  // zero carried by the unprojectivized Levi form is quotiented away first
  Surface oct(builtins::regular_octagon_desc(1.0));
  auto rep = convexity_check(oct);
  REQUIRE(rep.exh.zero >= 1);  // scale invariance
  REQUIRE(projective_nonpositive(rep.exh) <= 2);
  REQUIRE(rep.exh_scaling < 1e-3);
  REQUIRE(rep.log_area_scaling < 1e-3);
  REQUIRE(rep.energy.nonpositive() == 0);
  REQUIRE(rep.area.signature() == "(2,2,0)");
  REQUIRE(rep.log_area.signature() == "(1,2,1)");

  Surface slit(builtins::slit_tori_desc(0.1));
  auto he = complex_hessian(slit, [](const Surface& T) { return exh_m(T); });
  REQUIRE(he.zero >= 1);
  REQUIRE(projective_nonpositive(he) <= 2);
  REQUIRE(he.negative == 2);  // saturates the bound
}

TEST_CASE("nonpositive bound holds at random nearby surfaces") {
  std::mt19937_64 rng(20240817);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (std::string fam : {"regular_octagon", "slit_tori"}) {
    Surface base = fam == "slit_tori"
                       ? Surface(builtins::slit_tori_desc(0.15))
                       : Surface(builtins::regular_octagon_desc(1.0));
    PeriodChart chart(base);
    int checked = 0;
    for (int trial = 0; trial < 5; ++trial) {
      Eigen::VectorXcd delta(chart.rank());
      for (int a = 0; a < chart.rank(); ++a)
        delta[a] = 0.01 * systole(base) * cplx(unit(rng), unit(rng));
      Surface moved = chart.deform(delta);
      try {
        auto h = complex_hessian(moved,
                                 [](const Surface& T) { return exh_m(T); });
        REQUIRE(h.zero >= 1);
        REQUIRE(projective_nonpositive(h) <= 2);
        ++checked;
      } catch (const Error& e) {
        REQUIRE(e.code() == ErrorCode::NonSmoothPoint);
      }
    }
    INFO(fam);
    REQUIRE(checked >= 3);
  }
}

TEST_CASE("tied optimal bases are flagged as corners") {
  // on the hexagonal torus three shortest classes tie and the maximizing
  // basis switches, so the energy has a corner there
  Surface hex{hex_torus_desc()};
  REQUIRE(code_of([&] {
            complex_hessian(hex, [](const Surface& T) {
              return inv_square_basis_energy(T).sum;
            });
          }) == ErrorCode::NonSmoothPoint);
}

TEST_CASE("parameter sweeps") {
  auto area = family_sweep("rect_torus", {1.0}, "area", 0.5, 2.0, 4, false);
  REQUIRE(area.fit.slope == Catch::Approx(1.0).epsilon(1e-9));
  REQUIRE(area.fit.intercept == Catch::Approx(0.0).margin(1e-9));
  REQUIRE(area.fit.r2 == Catch::Approx(1.0).epsilon(1e-9));
  REQUIRE(area.rows.size() == 4);

  // the short loop stays the unit circumference while the height stretches
  auto loop = family_sweep("rect_torus", {1.0}, "loop", 1.0, 3.0, 4, false);
  REQUIRE(loop.fit.slope == Catch::Approx(0.0).margin(1e-9));
  REQUIRE(loop.fit.intercept == Catch::Approx(1.0).epsilon(1e-9));

  REQUIRE(code_of([] {
            family_sweep("rect_torus", {1.0}, "nope", 1.0, 2.0, 3, false);
          }) == ErrorCode::ParamOutOfRange);
  REQUIRE(code_of([] {
            family_sweep("rect_torus", {1.0}, "area", 1.0, 1.0, 3, false);
          }) == ErrorCode::ParamOutOfRange);
}

TEST_CASE("slit energy diverges with the expected power") {
  auto sweep =
      family_sweep("slit_tori", {}, "exh_m_linear", 1e-4, 1e-1, 5, true);
  REQUIRE(std::abs(sweep.fit.slope + 2.0) <= 0.05);
  REQUIRE(sweep.fit.r2 > 0.999);
}
