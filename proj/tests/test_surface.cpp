#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "flatstrata/io.hpp"
#include "flatstrata/surface.hpp"

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

}  // namespace

TEST_CASE("square torus basics") {
  Surface S(builtins::square_torus_desc());
  CHECK(S.signature().g == 1);
  CHECK(S.signature().n == 1);
  CHECK(S.signature().m == std::vector<int>{0});
  CHECK(S.signature().period_rank() == 2);
  CHECK(S.area() == Catch::Approx(1.0).epsilon(1e-12));
  REQUIRE(S.vertex_classes().size() == 1);
  CHECK(S.vertex_classes()[0].angle == Catch::Approx(2 * kPi).epsilon(1e-12));
  CHECK(S.cells().size() == 2);
  CHECK(S.num_edge_classes() == 2);
}

TEST_CASE("sheared torus validates") {
  SurfaceDesc d;
  d.polygons = {{cplx(0, 0), cplx(1, 0), cplx(1.3, 1), cplx(0.3, 1)}};
  d.gluings = {{{{0, 0}, {0, 2}}}, {{{0, 1}, {0, 3}}}};
  d.marked = {{0, 0, 0, true}};
  Surface S(d);
  CHECK(S.area() == Catch::Approx(1.0).epsilon(1e-12));
  CHECK(S.signature().g == 1);
}

TEST_CASE("regular octagon") {
  Surface S(builtins::regular_octagon_desc(1.0));
  CHECK(S.area() == Catch::Approx(2 * (1 + std::sqrt(2.0))).epsilon(1e-12));
  CHECK(S.signature().g == 2);
  CHECK(S.signature().n == 0);
  REQUIRE(S.signature().m == std::vector<int>{2});
  CHECK(S.signature().period_rank() == 4);
  REQUIRE(S.vertex_classes().size() == 1);
  CHECK(S.vertex_classes()[0].angle == Catch::Approx(6 * kPi).epsilon(1e-10));
  CHECK(S.num_edge_classes() == 4);
  CHECK(S.cells().size() == 6);
}

TEST_CASE("slit torus pair") {
  Surface S(builtins::slit_tori_desc(0.3));
  CHECK(S.signature().g == 2);
  CHECK(S.signature().n == 0);
  REQUIRE(S.signature().m == std::vector<int>({1, 1}));
  CHECK(S.signature().period_rank() == 5);
  CHECK(S.area() == Catch::Approx(2.0).epsilon(1e-12));
  CHECK(S.vertex_classes().size() == 6);
  CHECK(S.num_edge_classes() == 12);
  int four_pi = 0, two_pi = 0;
  for (const auto& vc : S.vertex_classes()) {
    if (std::abs(vc.angle - 4 * kPi) < 1e-9) ++four_pi;
    if (std::abs(vc.angle - 2 * kPi) < 1e-9) ++two_pi;
  }
  CHECK(four_pi == 2);
  CHECK(two_pi == 4);
}

TEST_CASE("stretched slit pair area") {
  Surface S(builtins::slit_tori_desc(0.3, 2.0));
  CHECK(S.area() == Catch::Approx(3.0).epsilon(1e-12));
  CHECK(S.signature().g == 2);
}

TEST_CASE("marking a regular vertex adds a free point") {
  SurfaceDesc d = builtins::mark_regular_vertex(builtins::slit_tori_desc(0.3), 0, 5);
  Surface S(d);
  CHECK(S.signature().g == 2);
  CHECK(S.signature().n == 1);
  CHECK(S.signature().m == std::vector<int>({0, 1, 1}));
  CHECK(S.signature().period_rank() == 6);
}

TEST_CASE("validation rejects bad input") {
  SECTION("unglued edge") {
    SurfaceDesc d = builtins::square_torus_desc();
    d.gluings.pop_back();
    CHECK(code_of([&] { Surface S(d); }) == ErrorCode::UnmatchedEdge);
  }
  SECTION("non-opposite edge vectors") {
    SurfaceDesc d = builtins::square_torus_desc();
    d.gluings = {{{{0, 0}, {0, 1}}}, {{{0, 2}, {0, 3}}}};
    CHECK(code_of([&] { Surface S(d); }) == ErrorCode::NonTranslationGluing);
  }
  SECTION("edge glued to itself") {
    SurfaceDesc d = builtins::square_torus_desc();
    d.gluings = {{{{0, 0}, {0, 0}}}, {{{0, 1}, {0, 3}}}};
    CHECK(code_of([&] { Surface S(d); }) == ErrorCode::NonTranslationGluing);
  }
  SECTION("self-intersecting polygon") {
    SurfaceDesc d;
    d.polygons = {{cplx(0, 0), cplx(1, 1), cplx(1, 0), cplx(0, 1)}};
    d.gluings = {{{{0, 0}, {0, 2}}}, {{{0, 1}, {0, 3}}}};
    d.marked = {{0, 0, 0, true}};
    CHECK(code_of([&] { Surface S(d); }) == ErrorCode::SelfIntersectingPolygon);
  }
  SECTION("wrong marked order") {
    SurfaceDesc d = builtins::square_torus_desc();
    d.marked = {{0, 0, 1, false}};
    CHECK(code_of([&] { Surface S(d); }) == ErrorCode::SignatureMismatch);
  }
  SECTION("free marks must precede zeros") {
    SurfaceDesc d = builtins::slit_tori_desc(0.3);
    std::swap(d.marked[0], d.marked[1]);
    SurfaceDesc d2 = builtins::mark_regular_vertex(d, 0, 5);
    std::rotate(d2.marked.begin(), d2.marked.begin() + 1, d2.marked.end());
    CHECK(code_of([&] { Surface S(d2); }) == ErrorCode::SignatureMismatch);
  }
  SECTION("unmarked cone point") {
    SurfaceDesc d = builtins::regular_octagon_desc(1.0);
    d.marked.clear();
    CHECK(code_of([&] { Surface S(d); }) == ErrorCode::SignatureMismatch);
  }
}

TEST_CASE("family dispatcher") {
  CHECK(Surface(builtins::make("square_torus", {})).area() ==
        Catch::Approx(1.0));
  CHECK(Surface(builtins::make("rect_torus", {2.0, 0.5})).area() ==
        Catch::Approx(1.0));
  CHECK(code_of([] { builtins::make("rect_torus", {2.0}); }) ==
        ErrorCode::ParamOutOfRange);
  CHECK(code_of([] { builtins::make("dodecahedron", {}); }) ==
        ErrorCode::UnknownFamily);
  CHECK(code_of([] { builtins::make("slit_tori", {1.5}); }) ==
        ErrorCode::ParamOutOfRange);
}

TEST_CASE("rescaling") {
  Surface S(builtins::regular_octagon_desc(1.0));
  Surface S2 = S.rescaled(cplx(2.0, 0));
  CHECK(S2.area() == Catch::Approx(4 * S.area()).epsilon(1e-12));
  Surface S3 = S.rescaled(cplx(0, 1));
  CHECK(S3.area() == Catch::Approx(S.area()).epsilon(1e-12));
  CHECK(S3.signature() == S.signature());
  CHECK_THROWS_AS(S.rescaled(cplx(0, 0)), Error);
}

TEST_CASE("serialization roundtrip") {
  Surface S(builtins::slit_tori_desc(0.25));
  const std::string text = serialize_surface(S.desc());
  Surface T(parse_surface(text));
  CHECK(T.area() == Catch::Approx(S.area()).epsilon(1e-12));
  CHECK(T.signature() == S.signature());
  CHECK(T.num_edge_classes() == S.num_edge_classes());
  CHECK(code_of([] { parse_surface("{not json"); }) ==
        ErrorCode::UnsupportedFormat);
}

TEST_CASE("triangulation adjacency is symmetric") {
  for (const char* fam : {"square_torus", "regular_octagon", "slit_tori"}) {
    Surface S(builtins::make(fam, fam == std::string("square_torus")
                                      ? std::vector<double>{}
                                      : std::vector<double>{fam == std::string("slit_tori") ? 0.3 : 1.0}));
    const auto& cells = S.cells();
    for (std::size_t c = 0; c < cells.size(); ++c)
      for (int s = 0; s < 3; ++s) {
        const int c2 = cells[c].nbr[s], s2 = cells[c].nbr_side[s];
        REQUIRE(c2 >= 0);
        CHECK(cells[c2].nbr[s2] == static_cast<int>(c));
        CHECK(cells[c2].nbr_side[s2] == s);
        CrossStep there = cross_side(S, static_cast<int>(c), s, cplx(0, 0));
        CrossStep back = cross_side(S, there.cell, there.side, there.shift);
        CHECK(back.cell == static_cast<int>(c));
        CHECK(std::abs(back.shift) <= 1e-12);
      }
  }
}
