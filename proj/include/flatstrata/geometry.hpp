#pragma once

// Planar predicates for polygon handling: signed area, simplicity tests,
// constrained ear-clipping triangulation, and small segment utilities.
// Everything is tolerance-based; callers pass a length scale so the same
// decisions are taken after rescaling a surface.

#include <algorithm>
#include <array>
#include <vector>

#include "flatstrata/common.hpp"

namespace flatstrata {

using Polygon = std::vector<cplx>;

inline double shoelace_area(const Polygon& p) {
  double a = 0.0;
  const std::size_t n = p.size();
  for (std::size_t i = 0; i < n; ++i) a += cross(p[i], p[(i + 1) % n]);
  return 0.5 * a;
}

inline double polygon_diameter(const Polygon& p) {
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      d = std::max(d, std::abs(p[i] - p[j]));
  return d;
}

// Distance from point x to segment [a, b].
inline double point_segment_distance(cplx x, cplx a, cplx b) {
  const cplx ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(x - a);
  double t = dot(x - a, ab) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(x - (a + t * ab));
}

// Proper or touching intersection test for segments [a,b] and [c,d].
// Shared endpoints do not count as intersections; interior contact does.
inline bool segments_cross(cplx a, cplx b, cplx c, cplx d, double tol) {
  auto near_point = [&](cplx u, cplx v) { return std::abs(u - v) <= tol; };
  const bool share = near_point(a, c) || near_point(a, d) || near_point(b, c) ||
                     near_point(b, d);
  const double d1 = cross(b - a, c - a);
  const double d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c);
  const double d4 = cross(d - c, b - c);
  const double s = std::abs(b - a), t = std::abs(d - c);
  const double band = tol * std::max({s, t, 1e-300});
  if (share) {
    // Segments touching at one endpoint are fine unless they overlap along a
    // whole sub-segment (collinear overlap).
    if (std::abs(d1) <= band && std::abs(d2) <= band) {
      // collinear: overlap iff the projections overlap beyond the shared point
      const cplx dir = (b - a) / s;
      auto proj = [&](cplx p) { return dot(p - a, dir); };
      double lo1 = 0, hi1 = s, lo2 = proj(c), hi2 = proj(d);
      if (lo2 > hi2) std::swap(lo2, hi2);
      return std::min(hi1, hi2) - std::max(lo1, lo2) > tol;
    }
    return false;
  }
  if (((d1 > band && d2 < -band) || (d1 < -band && d2 > band)) &&
      ((d3 > band && d4 < -band) || (d3 < -band && d4 > band)))
    return true;
  // endpoint-on-interior contact
  if (std::abs(d1) <= band && point_segment_distance(c, a, b) <= tol) return true;
  if (std::abs(d2) <= band && point_segment_distance(d, a, b) <= tol) return true;
  if (std::abs(d3) <= band && point_segment_distance(a, c, d) <= tol) return true;
  if (std::abs(d4) <= band && point_segment_distance(b, c, d) <= tol) return true;
  return false;
}

// A polygon is accepted when it is counterclockwise, has no repeated
// vertices, no zero-length edges, and no two non-adjacent edges touching.
// Collinear (angle pi) vertices are allowed: gluings may subdivide an edge.
inline bool polygon_is_simple_ccw(const Polygon& p, double tol) {
  const std::size_t n = p.size();
  if (n < 3) return false;
  if (shoelace_area(p) <= tol * tol) return false;
  for (std::size_t i = 0; i < n; ++i)
    if (std::abs(p[(i + 1) % n] - p[i]) <= tol) return false;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;  // adjacent edges
      if (segments_cross(p[i], p[(i + 1) % n], p[j], p[(j + 1) % n], tol))
        return false;
    }
  }
  // no duplicate vertices
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(p[i] - p[j]) <= tol) return false;
  return true;
}

// Interior angle at vertex i of a ccw polygon, in (0, 2*pi).
inline double interior_angle(const Polygon& p, std::size_t i) {
  const std::size_t n = p.size();
  const cplx in = p[i] - p[(i + n - 1) % n];
  const cplx out = p[(i + 1) % n] - p[i];
  // Angle turned from `in` to `out`; interior angle = pi - turn.
  double turn = std::arg(out / in);
  double ang = kPi - turn;
  if (ang <= 0) ang += kTwoPi;
  if (ang >= kTwoPi) ang -= kTwoPi;
  return ang;
}

struct Tri {
  std::array<int, 3> v;  // indices into the polygon's vertex list, ccw
};

namespace detail {

inline bool point_in_or_on_triangle(cplx p, cplx a, cplx b, cplx c, double tol) {
  const double s = std::max({std::abs(b - a), std::abs(c - b), std::abs(a - c)});
  const double band = tol * std::max(s, 1e-300);
  const double d1 = cross(b - a, p - a);
  const double d2 = cross(c - b, p - b);
  const double d3 = cross(a - c, p - c);
  if (d1 >= -band && d2 >= -band && d3 >= -band) {
    // Points merely collinear with an edge but outside its span do not block.
    if (d1 <= band && point_segment_distance(p, a, b) > tol) return false;
    if (d2 <= band && point_segment_distance(p, b, c) > tol) return false;
    if (d3 <= band && point_segment_distance(p, c, a) > tol) return false;
    return true;
  }
  return false;
}

}  // namespace detail

// Ear-clipping triangulation that introduces no new vertices.  Handles the
// collinear vertices that edge subdivision creates.  Input must be simple ccw.
inline std::vector<Tri> triangulate(const Polygon& poly, double tol) {
  const int n = static_cast<int>(poly.size());
  require(n >= 3, ErrorCode::SelfIntersectingPolygon, "polygon too small");
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  std::vector<Tri> tris;
  int guard = 0;
  while (idx.size() > 3) {
    const int m = static_cast<int>(idx.size());
    bool clipped = false;
    for (int k = 0; k < m; ++k) {
      const int ia = idx[(k + m - 1) % m], ib = idx[k], ic = idx[(k + 1) % m];
      const cplx a = poly[ia], b = poly[ib], c = poly[ic];
      const double area2 = cross(b - a, c - b);
      const double s = std::max(std::abs(b - a), std::abs(c - b));
      if (area2 <= tol * std::max(s, 1e-300)) continue;  // reflex or flat corner
      bool blocked = false;
      for (int j = 0; j < m && !blocked; ++j) {
        const int iv = idx[j];
        if (iv == ia || iv == ib || iv == ic) continue;
        blocked = detail::point_in_or_on_triangle(poly[iv], a, b, c, tol);
      }
      if (blocked) continue;
      tris.push_back({{ia, ib, ic}});
      idx.erase(idx.begin() + k);
      clipped = true;
      break;
    }
    require(clipped, ErrorCode::SelfIntersectingPolygon,
            "no ear found; polygon is not simple");
    if (++guard > 4 * n) break;
  }
  tris.push_back({{idx[0], idx[1], idx[2]}});
  return tris;
}

}  // namespace flatstrata
