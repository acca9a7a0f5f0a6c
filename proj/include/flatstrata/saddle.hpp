#pragma once

// Saddle connection enumeration by unfolding, straight-line tracing, and the
// metric quantities derived from them: systole, distances between marked
// points, and the shortest nontrivial closed geodesic.
//
// The enumerator walks the triangulated complex, developing triangles into
// the plane by translations.  Each search starts at a corner of a marked
// vertex and maintains a visibility wedge; a marked apex inside the wedge is
// a saddle connection, and the wedge splits there because proper segments
// cannot pass through marked points.  An unmarked apex has total angle 2*pi,
// so straight continuation through it is legal: the wedge splits but neither
// boundary ray is blocked.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "flatstrata/common.hpp"
#include "flatstrata/geometry.hpp"
#include "flatstrata/homology.hpp"
#include "flatstrata/surface.hpp"

namespace flatstrata {

struct SaddleConnection {
  int start_mark = -1;  // indices into the marked point list
  int end_mark = -1;
  cplx holonomy{};
  // polygon edges crossed by the open segment, in order; entry (p, e) means
  // the path leaves polygon p through its edge e
  std::vector<std::pair<int, int>> crossings;
  int start_poly = -1, start_vertex = -1;

  double length() const { return std::abs(holonomy); }
  double angle() const { return std::atan2(holonomy.imag(), holonomy.real()); }
};

namespace detail {

struct Budget {
  std::int64_t left;
  void spend(std::int64_t n = 1) {
    left -= n;
    require(left >= 0, ErrorCode::BudgetExceeded,
            "geodesic search exceeded the node budget");
  }
};

constexpr double kAngBand = 1e-10;

inline double ncross(cplx a, cplx b) {
  const double s = std::abs(a) * std::abs(b);
  return s > 0 ? cross(a, b) / s : 0.0;
}

struct Wedge {
  cplx l, r;  // cone from direction l counterclockwise to direction r
  bool lb = false, rb = false;  // boundary ray blocked by a closer marked point
};

// -1: clockwise of l; +1: counterclockwise of r; 0: inside (or on boundary)
inline int wedge_side(const Wedge& w, cplx d) {
  if (ncross(w.l, d) < -kAngBand) return -1;
  if (ncross(d, w.r) < -kAngBand) return +1;
  return 0;
}

inline bool same_ray(cplx a, cplx b) {
  return std::abs(ncross(a, b)) <= kAngBand && dot(a, b) > 0;
}

// Intersects w with the cone through window endpoints p, q.  p_marked and
// q_marked flag window endpoints that are marked vertices; a boundary ray
// created through a marked endpoint is blocked beyond it.  Returns false
// when the intersection is empty.
inline bool clip_wedge(Wedge& w, cplx p, cplx q, bool p_marked, bool q_marked) {
  cplx cl = p, cr = q;
  bool clb = p_marked, crb = q_marked;
  if (ncross(cl, cr) < 0) {
    std::swap(cl, cr);
    std::swap(clb, crb);
  }
  if (same_ray(w.l, cl)) {
    w.lb = w.lb || clb;
  } else if (ncross(w.l, cl) > 0) {
    w.l = cl;
    w.lb = clb;
  }
  if (same_ray(w.r, cr)) {
    w.rb = w.rb || crb;
  } else if (ncross(cr, w.r) > 0) {
    w.r = cr;
    w.rb = crb;
  }
  return ncross(w.l, w.r) >= -kAngBand;
}

// Minimal distance from the origin to the part of segment [a, b] whose
// direction lies inside the wedge (a conservative prune bound).
inline double wedge_window_distance(const Wedge& w, cplx a, cplx b) {
  double t0 = 0.0, t1 = 1.0;
  const cplx d = b - a;
  auto clip = [&](double c0, double c1) {
    const double den = c1 - c0;
    if (std::abs(den) < 1e-300) {
      if (c0 < 0) {
        t0 = 1.0;
        t1 = 0.0;
      }
      return;
    }
    const double tc = -c0 / den;
    if (den > 0)
      t0 = std::max(t0, tc);
    else
      t1 = std::min(t1, tc);
  };
  clip(cross(w.l, a), cross(w.l, b));
  clip(cross(a, w.r), cross(b, w.r));
  if (t0 > t1) return point_segment_distance(cplx(0, 0), a, b);
  return point_segment_distance(cplx(0, 0), a + t0 * d, a + t1 * d);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Development of a recorded connection back into polygon charts.

struct DevelopedPiece {
  int poly = -1;
  cplx tau{};           // polygon chart + tau = development frame
  double s_in = 0.0;    // fraction of the holonomy where the piece starts
  double s_out = 1.0;
  int entry_edge = -1;  // polygon edge through which the piece was entered
  double entry_t = 0.0;
  int exit_edge = -1;   // polygon edge through which the piece exits
  double exit_t = 0.0;
};

// Re-traces the recorded crossing list and checks that it develops into a
// single straight segment with the stated holonomy.
inline std::vector<DevelopedPiece> develop_connection(const Surface& S,
                                                      const SaddleConnection& sc) {
  const double tol = S.tol();
  const cplx h = sc.holonomy;
  std::vector<DevelopedPiece> pieces;
  int p = sc.start_poly;
  cplx tau = -S.polygons()[p][sc.start_vertex];
  double s_prev = 0.0;
  int entry_edge = -1;
  double entry_t = 0.0;
  for (auto [pc, ec] : sc.crossings) {
    require(pc == p, ErrorCode::Internal, "crossing list leaves wrong polygon");
    const Polygon& poly = S.polygons()[p];
    const int np = static_cast<int>(poly.size());
    const cplx e0 = poly[ec] + tau, e1 = poly[(ec + 1) % np] + tau;
    const cplx d = e1 - e0;
    const double den = cross(d, h);
    double s, t;
    if (std::abs(den) > 1e-12 * std::abs(d) * std::abs(h)) {
      s = cross(d, e0) / den;
      t = dot(s * h - e0, d) / std::norm(d);
    } else {
      // window collinear with the direction; the crossing happens at the
      // window endpoint that lies on the ray
      const bool at0 = std::abs(cross(h, e0)) <= tol * std::abs(h);
      const bool at1 = std::abs(cross(h, e1)) <= tol * std::abs(h);
      require(at0 || at1, ErrorCode::Internal, "degenerate crossing off ray");
      if (at0 && (!at1 || std::abs(e0) < std::abs(e1))) {
        s = dot(e0, h) / std::norm(h);
        t = 0.0;
      } else {
        s = dot(e1, h) / std::norm(h);
        t = 1.0;
      }
    }
    const double band = 1e-7;
    require(s > s_prev - band && s < 1.0 + band, ErrorCode::Internal,
            "crossing develops outside the segment");
    require(t > -band && t < 1.0 + band, ErrorCode::Internal,
            "crossing develops outside its window");
    t = std::clamp(t, 0.0, 1.0);
    s = std::clamp(s, s_prev, 1.0);
    pieces.push_back({p, tau, s_prev, s, entry_edge, entry_t, ec, t});
    const auto [q, f] = S.partner(p, ec);
    const cplx tau_next = (poly[(ec + 1) % np] + tau) - S.polygons()[q][f];
    p = q;
    tau = tau_next;
    entry_edge = f;
    entry_t = 1.0 - t;
    s_prev = s;
  }
  pieces.push_back({p, tau, s_prev, 1.0, entry_edge, entry_t, -1, 0.0});
  return pieces;
}

// Index of the polygon vertex at the far endpoint of the developed segment.
inline int developed_end_vertex(const Surface& S, const SaddleConnection& sc,
                                const DevelopedPiece& last) {
  const Polygon& poly = S.polygons()[last.poly];
  const double tol = S.tol();
  int best = -1;
  double bd = 10 * tol * std::max(1.0, std::abs(sc.holonomy));
  for (int v = 0; v < static_cast<int>(poly.size()); ++v) {
    const double d = std::abs(poly[v] + last.tau - sc.holonomy);
    if (d < bd) {
      bd = d;
      best = v;
    }
  }
  require(best >= 0, ErrorCode::Internal, "segment does not end at a vertex");
  return best;
}

namespace detail {

// Canonical description of a surface point for geometric comparison:
// vertex class, point on a glued edge (class + offset from the class
// representative's start), or polygon interior point.
struct CanonPoint {
  int kind = 2;  // 0 vertex, 1 edge, 2 interior
  int id = -1;
  cplx pos{};

  bool same(const CanonPoint& o, double tol) const {
    if (kind != o.kind || id != o.id) return false;
    return std::abs(pos - o.pos) <= tol;
  }
};

inline CanonPoint canonical_point(const Surface& S, int p, cplx x) {
  const double tol = 8 * S.tol();
  const Polygon& poly = S.polygons()[p];
  const int np = static_cast<int>(poly.size());
  for (int v = 0; v < np; ++v)
    if (std::abs(x - poly[v]) <= tol)
      return {0, S.vertex_class_of(p, v), cplx(0, 0)};
  for (int e = 0; e < np; ++e) {
    const cplx a = poly[e], b = poly[(e + 1) % np];
    if (point_segment_distance(x, a, b) <= tol) {
      const double t = dot(x - a, b - a) / std::norm(b - a);
      const auto [rp, re] = S.edge_rep(S.edge_class_of(p, e));
      const double tr = (rp == p && re == e) ? t : 1.0 - t;
      return {1, S.edge_class_of(p, e), cplx(tr * std::abs(b - a), 0)};
    }
  }
  return {2, p, x};
}

inline CanonPoint connection_midpoint(const Surface& S,
                                      const SaddleConnection& sc) {
  const auto pieces = develop_connection(S, sc);
  for (const auto& pc : pieces) {
    if (pc.s_out >= 0.5 - 1e-12) {
      const cplx x = 0.5 * sc.holonomy - pc.tau;
      return canonical_point(S, pc.poly, x);
    }
  }
  return canonical_point(S, pieces.back().poly,
                         sc.holonomy - pieces.back().tau);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Enumeration

// Every oriented saddle connection of length <= max_len, sorted by
// (length, angle, start, end) and deduplicated geometrically.
inline std::vector<SaddleConnection> enumerate_saddles(const Surface& S,
                                                       double max_len,
                                                       const Config& cfg = Config{}) {
  require(max_len > 0, ErrorCode::ParamOutOfRange, "cutoff must be positive");
  detail::Budget budget{cfg.node_budget};
  const double tol = S.tol();
  const auto& cells = S.cells();
  const auto& vcs = S.vertex_classes();

  std::vector<SaddleConnection> out;

  struct Node {
    int cell = -1, side = -1;  // entry side, or cell == -2 for a path pop
    cplx tau{};
    detail::Wedge w{};
    int cross_poly = -1, cross_edge = -1;
  };

  auto marked = [&](int vclass) { return vcs[vclass].marking >= 0; };

  for (int start_class : S.marked_classes()) {
    const int start_mark = vcs[start_class].marking;
    for (std::size_t c0 = 0; c0 < cells.size(); ++c0) {
      for (int k = 0; k < 3; ++k) {
        if (cells[c0].vclass[k] != start_class) continue;
        const TriCell& t0 = cells[c0];
        const cplx tau0 = -t0.x[k];
        const int kb = (k + 1) % 3, kc = (k + 2) % 3;
        const cplx B = t0.x[kb] + tau0, C = t0.x[kc] + tau0;

        std::vector<std::pair<int, int>> path;
        auto record = [&](cplx hol, int end_class) {
          SaddleConnection sc;
          sc.start_mark = start_mark;
          sc.end_mark = vcs[end_class].marking;
          sc.holonomy = hol;
          sc.crossings = path;
          sc.start_poly = t0.poly;
          sc.start_vertex = t0.v[k];
          out.push_back(std::move(sc));
        };

        // Around a vertex every wedge boundary ray is the l boundary of
        // exactly one corner triangle, so recording only the l neighbor
        // finds each triangle-side connection once.
        if (marked(t0.vclass[kb]) && std::abs(B) <= max_len + tol)
          record(B, t0.vclass[kb]);

        std::vector<Node> stack;
        auto push_child = [&](int cell, int side, cplx tau,
                              const detail::Wedge& w) {
          const TriCell& cur = cells[cell];
          if (cur.nbr[side] < 0) return;
          // a single blocked ray can hold no further endpoints
          if (detail::same_ray(w.l, w.r) && (w.lb || w.rb)) return;
          const cplx a = cur.x[side] + tau;
          const cplx b = cur.x[(side + 1) % 3] + tau;
          if (detail::wedge_window_distance(w, a, b) > max_len + tol) return;
          const CrossStep st = cross_side(S, cell, side, tau);
          Node nd;
          nd.cell = st.cell;
          nd.side = st.side;
          nd.tau = st.shift;
          nd.w = w;
          if (cur.poly_edge[side] >= 0) {
            nd.cross_poly = cur.poly;
            nd.cross_edge = cur.poly_edge[side];
          }
          stack.push_back(nd);
        };

        push_child(static_cast<int>(c0), kb,  tau0,
                   detail::Wedge{B, C, marked(t0.vclass[kb]),
                                 marked(t0.vclass[kc])});

        while (!stack.empty()) {
          Node nd = stack.back();
          stack.pop_back();
          if (nd.cell == -2) {
            path.pop_back();
            continue;
          }
          budget.spend();
          if (nd.cross_poly >= 0) {
            path.push_back({nd.cross_poly, nd.cross_edge});
            Node marker;
            marker.cell = -2;
            stack.push_back(marker);
          }
          const TriCell& t = cells[nd.cell];
          const int s = nd.side;
          const int sb = (s + 1) % 3, sc_ = (s + 2) % 3;
          const cplx A = t.x[s] + nd.tau;
          const cplx Bp = t.x[sb] + nd.tau;
          const cplx Cp = t.x[sc_] + nd.tau;
          const bool cm = marked(t.vclass[sc_]);

          const int side_c = detail::wedge_side(nd.w, Cp);
          if (side_c == 0) {
            const bool on_l =
                std::abs(detail::ncross(nd.w.l, Cp)) <= detail::kAngBand;
            const bool on_r =
                std::abs(detail::ncross(Cp, nd.w.r)) <= detail::kAngBand;
            const bool blocked = (on_l && nd.w.lb) || (on_r && nd.w.rb);
            if (cm && !blocked && std::abs(Cp) <= max_len + tol)
              record(Cp, t.vclass[sc_]);
          }

          // the apex ray splits the window cone into [B, C] and [C, A]
          if (side_c >= 0) {
            detail::Wedge wl = nd.w;
            if (detail::clip_wedge(wl, Bp, Cp, marked(t.vclass[sb]), cm))
              push_child(nd.cell, sb, nd.tau, wl);
          }
          if (side_c <= 0) {
            detail::Wedge wr = nd.w;
            if (detail::clip_wedge(wr, Cp, A, cm, marked(t.vclass[s])))
              push_child(nd.cell, sc_, nd.tau, wr);
          }
        }
      }
    }
  }

  std::sort(out.begin(), out.end(),
            [](const SaddleConnection& a, const SaddleConnection& b) {
              if (std::abs(a.length() - b.length()) >
                  1e-13 * (1.0 + a.length()))
                return a.length() < b.length();
              if (std::abs(a.angle() - b.angle()) > 1e-13)
                return a.angle() < b.angle();
              if (a.start_mark != b.start_mark)
                return a.start_mark < b.start_mark;
              if (a.end_mark != b.end_mark) return a.end_mark < b.end_mark;
              return a.crossings < b.crossings;
            });

  // Geometric dedup: the same segment can be discovered through corridors on
  // both sides of an unmarked vertex it passes through.  Distinct parallel
  // twins with equal holonomy (they exist) are kept apart by their midpoints.
  std::vector<SaddleConnection> kept;
  std::vector<std::optional<detail::CanonPoint>> mid;
  for (auto& sc : out) {
    bool dup = false;
    std::optional<detail::CanonPoint> my_mid;
    for (int i = static_cast<int>(kept.size()) - 1; i >= 0; --i) {
      if (sc.length() - kept[i].length() > 6 * tol) break;
      if (kept[i].start_mark != sc.start_mark ||
          kept[i].end_mark != sc.end_mark ||
          std::abs(kept[i].holonomy - sc.holonomy) > 6 * tol)
        continue;
      if (kept[i].crossings == sc.crossings &&
          kept[i].start_poly == sc.start_poly &&
          kept[i].start_vertex == sc.start_vertex) {
        dup = true;
        break;
      }
      if (!mid[i]) mid[i] = detail::connection_midpoint(S, kept[i]);
      if (!my_mid) my_mid = detail::connection_midpoint(S, sc);
      if (my_mid->same(*mid[i], 16 * tol)) {
        dup = true;
        break;
      }
    }
    if (!dup) {
      kept.push_back(std::move(sc));
      mid.push_back(std::move(my_mid));
    }
  }
  return kept;
}

// ---------------------------------------------------------------------------
// Homology coordinates of a connection via the dual cocycle potentials.

inline Eigen::VectorXd connection_coords(const PeriodChart& chart,
                                         const SaddleConnection& sc) {
  const Surface& S = chart.surface();
  const auto pieces = develop_connection(S, sc);
  const int d = chart.rank();
  Eigen::VectorXd val = Eigen::VectorXd::Zero(d);
  const int v_end = developed_end_vertex(S, sc, pieces.back());
  for (int a = 0; a < d; ++a) {
    double acc = 0.0;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      const auto& pc = pieces[i];
      const double f_in =
          (i == 0) ? chart.potential(a, pc.poly, sc.start_vertex)
                   : chart.potential_on_edge(a, pc.poly, pc.entry_edge,
                                             pc.entry_t);
      const double f_out =
          (i + 1 == pieces.size())
              ? chart.potential(a, pc.poly, v_end)
              : chart.potential_on_edge(a, pc.poly, pc.exit_edge, pc.exit_t);
      acc += f_out - f_in;
    }
    const double r = std::round(acc);
    require(std::abs(acc - r) <= 1e-6, ErrorCode::Internal,
            "pairing of a relative cycle drifted off the integers");
    val(a) = r;
  }
  return val;
}

// ---------------------------------------------------------------------------
// Disk containment, for the localized functionals.

// Whether the developed segment stays inside the radius-r disk around the
// marked class `center_class`.  The distance to a cone point is convex along
// a developed segment, so per developed piece it is enough to check the piece
// endpoints against the placed copies of the center.
inline bool connection_contained_in_disk(const Surface& S,
                                         const SaddleConnection& sc,
                                         int center_class, double r) {
  if (sc.length() > 2 * r + S.tol()) return false;
  const auto pieces = develop_connection(S, sc);
  const double slack = r + 4 * S.tol();
  for (const auto& pc : pieces) {
    const Polygon& poly = S.polygons()[pc.poly];
    std::vector<cplx> copies;
    for (int v = 0; v < static_cast<int>(poly.size()); ++v)
      if (S.vertex_class_of(pc.poly, v) == center_class)
        copies.push_back(poly[v] + pc.tau);
    if (copies.empty()) return false;
    for (double s : {pc.s_in, pc.s_out}) {
      const cplx x = s * sc.holonomy;
      double best = std::numeric_limits<double>::infinity();
      for (cplx c : copies) best = std::min(best, std::abs(x - c));
      if (best > slack) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Systole and distances

inline double min_edge_length(const Surface& S) {
  double m = std::numeric_limits<double>::infinity();
  for (int c = 0; c < S.num_edge_classes(); ++c)
    m = std::min(m, std::abs(S.edge_holonomy(c)));
  return m;
}

// Shortest saddle connection.  The enumeration is complete below its cutoff,
// so the first nonempty pass certifies the minimum.
inline double systole(const Surface& S, const Config& cfg = Config{}) {
  double L = min_edge_length(S);
  for (int it = 0; it < 64; ++it) {
    auto conns = enumerate_saddles(S, L, cfg);
    if (!conns.empty()) return conns.front().length();
    L *= 2;
  }
  fail(ErrorCode::BudgetExceeded, "no saddle connection found below cutoff");
}

// Distance between marked points i and j.  A shortest path between marked
// points on a translation surface is a concatenation of saddle connections,
// so Dijkstra over all connections of length <= L is exact once the best
// value drops below L.
inline double marked_distance(const Surface& S, int i, int j,
                              const Config& cfg = Config{}) {
  const int nm = S.num_marked();
  require(i >= 0 && i < nm && j >= 0 && j < nm, ErrorCode::ParamOutOfRange,
          "marked point index out of range");
  if (i == j) return 0.0;
  double L = 2 * systole(S, cfg);
  for (int it = 0; it < 64; ++it) {
    auto conns = enumerate_saddles(S, L, cfg);
    std::vector<std::vector<std::pair<int, double>>> adj(nm);
    for (const auto& sc : conns)
      adj[sc.start_mark].push_back({sc.end_mark, sc.length()});
    std::vector<double> dist(nm, std::numeric_limits<double>::infinity());
    using QE = std::pair<double, int>;
    std::priority_queue<QE, std::vector<QE>, std::greater<QE>> pq;
    dist[i] = 0.0;
    pq.push({0.0, i});
    while (!pq.empty()) {
      auto [dcur, u] = pq.top();
      pq.pop();
      if (dcur > dist[u] + 1e-15) continue;
      for (auto [v, w] : adj[u])
        if (dist[u] + w < dist[v] - 1e-15) {
          dist[v] = dist[u] + w;
          pq.push({dist[v], v});
        }
    }
    if (dist[j] <= L) return dist[j];
    L *= 1.7;
  }
  fail(ErrorCode::BudgetExceeded, "marked points not connected below cutoff");
}

// ---------------------------------------------------------------------------
// Straight-line flow tracing and cylinder cores

namespace detail {

struct TraceResult {
  bool closed = false;
  double length = 0.0;
};

// Follows the straight-line flow from x0 in cell0 (polygon chart coordinates)
// with unit direction u.  Aborts on hitting a vertex; reports closure when
// the trajectory returns through its starting point.
inline TraceResult trace_flow(const Surface& S, int cell0, cplx x0, cplx u,
                              double cutoff, Budget& budget) {
  const auto& cells = S.cells();
  const double close_eps = 1e-7 * std::max(1.0, S.diameter());
  const double vtol = 10 * S.tol();
  int cell = cell0;
  cplx x = x0;
  double total = 0.0;
  for (;;) {
    budget.spend();
    const TriCell& t = cells[cell];
    double best_tau = std::numeric_limits<double>::infinity();
    int bs = -1;
    cplx xe{};
    for (int s = 0; s < 3; ++s) {
      const cplx a = t.x[s], b = t.x[(s + 1) % 3];
      const cplx d = b - a;
      const double den = cross(d, u);
      if (std::abs(den) <= 1e-13 * std::abs(d)) continue;
      const double tau = cross(d, a - x) / den;
      if (tau <= 1e-12 * std::max(1.0, std::abs(x))) continue;
      const cplx w = x + tau * u;
      const double tt = dot(w - a, d) / std::norm(d);
      if (tt < -1e-9 || tt > 1 + 1e-9) continue;
      if (tau < best_tau) {
        best_tau = tau;
        bs = s;
        xe = w;
      }
    }
    if (bs < 0) return {};
    for (int j = 0; j < 3; ++j)
      if (std::abs(xe - t.x[j]) <= vtol) return {};
    if (cell == cell0) {
      const double along = dot(x0 - x, u);
      const double perp = std::abs(cross(u, x0 - x));
      if (along >= -close_eps && along <= best_tau + close_eps &&
          perp <= close_eps && total + along > 10 * close_eps)
        return {true, total + along};
    }
    total += best_tau;
    if (total > cutoff) return {};
    const CrossStep st = cross_side(S, cell, bs, cplx(0, 0));
    cell = st.cell;
    x = xe - st.shift;
  }
}

// Locates a point given in polygon p's chart, mapping across one gluing when
// it falls just outside.
inline std::optional<std::pair<int, cplx>> locate_point(const Surface& S,
                                                        int p, cplx x) {
  const auto& cells = S.cells();
  auto in_cell = [&](const TriCell& t, cplx y) {
    const double band = 4 * S.tol();
    for (int s = 0; s < 3; ++s) {
      const cplx a = t.x[s], b = t.x[(s + 1) % 3];
      if (cross(b - a, y - a) < -band * std::abs(b - a)) return false;
    }
    return true;
  };
  for (std::size_t c = 0; c < cells.size(); ++c)
    if (cells[c].poly == p && in_cell(cells[c], x))
      return std::make_pair(static_cast<int>(c), x);
  const Polygon& poly = S.polygons()[p];
  const int np = static_cast<int>(poly.size());
  for (int e = 0; e < np; ++e) {
    const auto [q, f] = S.partner(p, e);
    const cplx y = x + (S.polygons()[q][f] - poly[(e + 1) % np]);
    for (std::size_t c = 0; c < cells.size(); ++c)
      if (cells[c].poly == q && in_cell(cells[c], y))
        return std::make_pair(static_cast<int>(c), y);
  }
  return std::nullopt;
}

}  // namespace detail

struct ShortestLoop {
  double length = 0.0;
  bool from_core = false;  // realized by a cylinder core, not a closed connection
  bool warning = false;    // a shorter concatenated geodesic may exist
  double systole = 0.0;
};

// Shortest closed geodesic candidate: the minimum over closed saddle
// connections and cylinder core circumferences.  Cores are found by flowing
// from points slightly off enumerated connections; a cylinder's boundary
// contains a connection no longer than its circumference, so sweeping the
// directions of all connections <= L finds every core <= L.  Closed
// geodesics built from two or more connections are deliberately not
// searched; the warning flag is set when the result is long enough that
// such a concatenation could undercut it.
inline ShortestLoop shortest_loop(const Surface& S, const Config& cfg = Config{}) {
  ShortestLoop res;
  res.systole = systole(S, cfg);
  detail::Budget budget{cfg.node_budget};
  const double eps = 1e-6 * std::max(1.0, S.diameter());
  double L = 2 * res.systole;
  for (int it = 0; it < 64; ++it) {
    auto conns = enumerate_saddles(S, L, cfg);
    double best = std::numeric_limits<double>::infinity();
    bool from_core = false;
    for (const auto& sc : conns)
      if (sc.start_mark == sc.end_mark && sc.length() < best) {
        best = sc.length();
        from_core = false;
      }
    for (const auto& sc : conns) {
      const auto pieces = develop_connection(S, sc);
      const cplx u = sc.holonomy / sc.length();
      const DevelopedPiece* mid = &pieces.back();
      for (const auto& pc : pieces)
        if (pc.s_out >= 0.5 - 1e-12) {
          mid = &pc;
          break;
        }
      const cplx xm = 0.5 * sc.holonomy - mid->tau;
      for (double sgn : {1.0, -1.0}) {
        const cplx q = xm + sgn * eps * cplx(0, 1) * u;
        auto loc = detail::locate_point(S, mid->poly, q);
        if (!loc) continue;
        auto tr = detail::trace_flow(S, loc->first, loc->second, u,
                                     L * (1 + 1e-9) + eps, budget);
        if (tr.closed && tr.length < best) {
          best = tr.length;
          from_core = true;
        }
      }
    }
    if (best <= L) {
      res.length = best;
      res.from_core = from_core;
      res.warning = best > 1.8 * res.systole;
      return res;
    }
    L *= 1.7;
  }
  fail(ErrorCode::BudgetExceeded, "no closed geodesic found below cutoff");
}

}  // namespace flatstrata
