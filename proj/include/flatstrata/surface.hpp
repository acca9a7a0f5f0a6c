#pragma once

// Translation surfaces built from euclidean polygons with translation
// gluings.  A validated Surface carries all derived combinatorial data:
// vertex classes with cone angles, oriented edge classes, a constrained
// triangulation with adjacency for straight-line tracing, and the stratum
// signature (g, n, m).

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "flatstrata/common.hpp"
#include "flatstrata/geometry.hpp"

namespace flatstrata {

struct Marking {
  int poly = 0;
  int vertex = 0;
  int order = 0;    // zero order m_i; cone angle is 2*pi*(order+1)
  bool free = false;  // free marked points come first and may have order 0
};

// Raw, unvalidated description: what the file format stores.
struct SurfaceDesc {
  std::vector<Polygon> polygons;
  // Each gluing identifies edge (p, e) with edge (q, f); edge e of a polygon
  // runs from vertex e to vertex e+1 (cyclically).
  std::vector<std::array<std::array<int, 2>, 2>> gluings;
  std::vector<Marking> marked;
};

struct StratumSignature {
  int g = 0;
  int n = 0;
  std::vector<int> m;  // orders of all marked points, p_1 .. p_{n+k}

  int k() const { return static_cast<int>(m.size()) - n; }
  int eps_n() const { return n == 0 ? 0 : 1; }
  int depth() const { return 2 * g - 3 + eps_n(); }
  // dim H^1(C, P; C), the number of period coordinates
  int period_rank() const { return 2 * g + static_cast<int>(m.size()) - 1; }
  bool operator==(const StratumSignature& o) const {
    return g == o.g && n == o.n && m == o.m;
  }
  std::string to_string() const {
    std::string s = "g=" + std::to_string(g) + ",n=" + std::to_string(n) + ",m=(";
    for (std::size_t i = 0; i < m.size(); ++i)
      s += (i ? "," : "") + std::to_string(m[i]);
    return s + ")";
  }
};

struct VertexClass {
  std::vector<std::pair<int, int>> corners;  // (poly, vertex)
  double angle = 0.0;
  int order = -1;        // -1 when unmarked (angle must then be 2*pi)
  int marking = -1;      // index into marked list, -1 when unmarked
  bool free = false;
};

// Triangulated complex used by all straight-line tracing.
struct TriCell {
  int poly = 0;
  std::array<int, 3> v{};       // polygon vertex indices, ccw
  std::array<cplx, 3> x{};      // their coordinates (polygon chart)
  std::array<int, 3> vclass{};  // vertex class ids
  std::array<int, 3> nbr{};     // neighbor cell across side s (v[s] -> v[s+1])
  std::array<int, 3> nbr_side{};
  std::array<int, 3> poly_edge{};  // polygon edge index of side s, -1 if diagonal
};

class Surface {
 public:
  // Validates and derives everything; throws Error on any defect.
  explicit Surface(SurfaceDesc desc, const Config& cfg = Config{})
      : desc_(std::move(desc)) {
    build(cfg);
  }

  const SurfaceDesc& desc() const { return desc_; }
  const std::vector<Polygon>& polygons() const { return desc_.polygons; }
  int num_polygons() const { return static_cast<int>(desc_.polygons.size()); }
  int poly_size(int p) const { return static_cast<int>(desc_.polygons[p].size()); }

  double area() const { return area_; }
  double diameter() const { return diameter_; }
  // Geometric coincidence tolerance at this surface's scale.
  double tol() const { return tol_; }

  const StratumSignature& signature() const { return sig_; }
  int genus() const { return sig_.g; }

  const std::vector<VertexClass>& vertex_classes() const { return vclasses_; }
  int vertex_class_of(int p, int v) const { return vclass_[p][v]; }
  int num_edge_classes() const { return num_edges_; }
  int edge_class_of(int p, int e) const { return eclass_[p][e]; }
  int edge_sign_of(int p, int e) const { return esign_[p][e]; }
  std::pair<int, int> edge_rep(int c) const { return ereps_[c]; }
  std::pair<int, int> partner(int p, int e) const { return partner_[p][e]; }

  // Holonomy of the canonical representative of edge class c.
  cplx edge_holonomy(int c) const {
    auto [p, e] = ereps_[c];
    return desc_.polygons[p][(e + 1) % poly_size(p)] - desc_.polygons[p][e];
  }

  const std::vector<TriCell>& cells() const { return cells_; }
  // (cell, side) lying on polygon edge (p, e)
  std::pair<int, int> cell_of_edge(int p, int e) const { return edge_cell_[p][e]; }

  // Marked classes in marking order: marked_class_[i] = vertex class of p_{i+1}.
  const std::vector<int>& marked_classes() const { return marked_class_; }
  int num_marked() const { return static_cast<int>(marked_class_.size()); }

  Surface rescaled(cplx lambda, const Config& cfg = Config{}) const {
    require(std::abs(lambda) > 1e-300, ErrorCode::ZeroScalar,
            "rescale by zero is not invertible");
    SurfaceDesc d = desc_;
    for (auto& poly : d.polygons)
      for (auto& z : poly) z *= lambda;
    return Surface(std::move(d), cfg);
  }

 private:
  SurfaceDesc desc_;
  double area_ = 0.0, diameter_ = 0.0, tol_ = 0.0;
  StratumSignature sig_;
  std::vector<VertexClass> vclasses_;
  std::vector<std::vector<int>> vclass_;
  std::vector<std::vector<int>> eclass_, esign_;
  std::vector<std::pair<int, int>> ereps_;
  std::vector<std::vector<std::pair<int, int>>> partner_;
  int num_edges_ = 0;
  std::vector<TriCell> cells_;
  std::vector<std::vector<std::pair<int, int>>> edge_cell_;
  std::vector<int> marked_class_;

  void build(const Config& cfg) {
    cfg.check();
    const int np = num_polygons();
    require(np > 0, ErrorCode::BadFile, "surface has no polygons");

    diameter_ = 0.0;
    for (const auto& poly : desc_.polygons)
      diameter_ = std::max(diameter_, polygon_diameter(poly));
    tol_ = cfg.eps_geom * std::max(1.0, diameter_);

    for (int p = 0; p < np; ++p)
      require(polygon_is_simple_ccw(desc_.polygons[p], tol_),
              ErrorCode::SelfIntersectingPolygon,
              "polygon " + std::to_string(p) +
                  " is not simple counterclockwise");

    area_ = 0.0;
    for (const auto& poly : desc_.polygons) area_ += shoelace_area(poly);

    check_gluings();
    build_vertex_classes(cfg);
    build_markings(cfg);
    build_triangulation();
    build_signature();
  }

  void check_gluings() {
    const int np = num_polygons();
    partner_.assign(np, {});
    for (int p = 0; p < np; ++p)
      partner_[p].assign(poly_size(p), {-1, -1});

    auto edge_vec = [&](int p, int e) {
      return desc_.polygons[p][(e + 1) % poly_size(p)] - desc_.polygons[p][e];
    };

    for (const auto& gl : desc_.gluings) {
      const int p = gl[0][0], e = gl[0][1], q = gl[1][0], f = gl[1][1];
      auto valid = [&](int pp, int ee) {
        return pp >= 0 && pp < np && ee >= 0 && ee < poly_size(pp);
      };
      require(valid(p, e) && valid(q, f), ErrorCode::BadFile,
              "gluing refers to a nonexistent edge");
      require(!(p == q && e == f), ErrorCode::NonTranslationGluing,
              "edge glued to itself");
      require(partner_[p][e].first < 0 && partner_[q][f].first < 0,
              ErrorCode::UnmatchedEdge, "edge glued more than once");
      require(std::abs(edge_vec(p, e) + edge_vec(q, f)) <= tol_,
              ErrorCode::NonTranslationGluing,
              "glued edge vectors are not opposite");
      partner_[p][e] = {q, f};
      partner_[q][f] = {p, e};
    }
    for (int p = 0; p < np; ++p)
      for (int e = 0; e < poly_size(p); ++e)
        require(partner_[p][e].first >= 0, ErrorCode::UnmatchedEdge,
                "edge (" + std::to_string(p) + "," + std::to_string(e) +
                    ") is unglued");

    // edge classes: one id per glued pair, canonical representative is the
    // lexicographically smaller (poly, edge)
    eclass_.assign(np, {});
    esign_.assign(np, {});
    for (int p = 0; p < np; ++p) {
      eclass_[p].assign(poly_size(p), -1);
      esign_[p].assign(poly_size(p), 0);
    }
    num_edges_ = 0;
    ereps_.clear();
    for (int p = 0; p < np; ++p)
      for (int e = 0; e < poly_size(p); ++e) {
        if (eclass_[p][e] >= 0) continue;
        auto [q, f] = partner_[p][e];
        eclass_[p][e] = num_edges_;
        esign_[p][e] = 1;
        eclass_[q][f] = num_edges_;
        esign_[q][f] = -1;
        ereps_.push_back({p, e});
        ++num_edges_;
      }

    // connectivity over polygons
    std::vector<int> comp(np, -1);
    std::vector<int> stack = {0};
    comp[0] = 0;
    while (!stack.empty()) {
      int p = stack.back();
      stack.pop_back();
      for (int e = 0; e < poly_size(p); ++e) {
        int q = partner_[p][e].first;
        if (comp[q] < 0) {
          comp[q] = 0;
          stack.push_back(q);
        }
      }
    }
    require(std::all_of(comp.begin(), comp.end(), [](int c) { return c == 0; }),
            ErrorCode::SignatureMismatch, "surface is not connected");
  }

  void build_vertex_classes(const Config& cfg) {
    const int np = num_polygons();
    std::vector<int> offset(np + 1, 0);
    for (int p = 0; p < np; ++p) offset[p + 1] = offset[p] + poly_size(p);
    const int total = offset[np];
    std::vector<int> uf(total);
    std::iota(uf.begin(), uf.end(), 0);
    std::function<int(int)> find = [&](int a) {
      while (uf[a] != a) a = uf[a] = uf[uf[a]];
      return a;
    };
    auto unite = [&](int a, int b) { uf[find(a)] = find(b); };
    auto cid = [&](int p, int v) { return offset[p] + v; };

    // A gluing of edge (p,e) onto (q,f) matches the start of one with the end
    // of the other.
    for (int p = 0; p < np; ++p)
      for (int e = 0; e < poly_size(p); ++e) {
        auto [q, f] = partner_[p][e];
        unite(cid(p, e), cid(q, (f + 1) % poly_size(q)));
        unite(cid(p, (e + 1) % poly_size(p)), cid(q, f));
      }

    std::map<int, int> root_to_class;
    vclasses_.clear();
    vclass_.assign(np, {});
    for (int p = 0; p < np; ++p) {
      vclass_[p].assign(poly_size(p), -1);
      for (int v = 0; v < poly_size(p); ++v) {
        int r = find(cid(p, v));
        auto it = root_to_class.find(r);
        if (it == root_to_class.end()) {
          it = root_to_class.emplace(r, static_cast<int>(vclasses_.size())).first;
          vclasses_.push_back({});
        }
        vclass_[p][v] = it->second;
        vclasses_[it->second].corners.push_back({p, v});
      }
    }

    for (auto& vc : vclasses_) {
      vc.angle = 0.0;
      for (auto [p, v] : vc.corners)
        vc.angle += interior_angle(desc_.polygons[p], v);
      const double turns = vc.angle / kTwoPi;
      require(std::abs(turns - std::round(turns)) <= cfg.eps_angle &&
                  std::round(turns) >= 1.0,
              ErrorCode::AngleNotMultipleOf2Pi,
              "cone angle " + std::to_string(vc.angle) +
                  " is not a positive multiple of 2*pi");
    }
  }

  void build_markings(const Config& cfg) {
    marked_class_.clear();
    bool seen_nonfree = false;
    std::vector<int> claimed(vclasses_.size(), -1);
    for (std::size_t i = 0; i < desc_.marked.size(); ++i) {
      const Marking& mk = desc_.marked[i];
      require(mk.poly >= 0 && mk.poly < num_polygons() && mk.vertex >= 0 &&
                  mk.vertex < poly_size(mk.poly),
              ErrorCode::BadFile, "marking refers to a nonexistent vertex");
      if (mk.free) {
        require(!seen_nonfree, ErrorCode::SignatureMismatch,
                "free marked points must precede zeros");
      } else {
        seen_nonfree = true;
        require(mk.order >= 1, ErrorCode::SignatureMismatch,
                "non-free marked point must have positive order");
      }
      require(mk.order >= 0, ErrorCode::SignatureMismatch, "negative order");
      const int c = vclass_[mk.poly][mk.vertex];
      require(claimed[c] < 0, ErrorCode::SignatureMismatch,
              "two markings on one vertex class");
      claimed[c] = static_cast<int>(i);
      VertexClass& vc = vclasses_[c];
      const double want = kTwoPi * (mk.order + 1);
      require(std::abs(vc.angle - want) <= cfg.eps_angle * (mk.order + 1),
              ErrorCode::SignatureMismatch,
              "marked order " + std::to_string(mk.order) +
                  " does not match cone angle");
      vc.order = mk.order;
      vc.marking = static_cast<int>(i);
      vc.free = mk.free;
      marked_class_.push_back(c);
    }
    for (std::size_t c = 0; c < vclasses_.size(); ++c) {
      if (claimed[c] >= 0) continue;
      require(std::abs(vclasses_[c].angle - kTwoPi) <= cfg.eps_angle,
              ErrorCode::SignatureMismatch,
              "cone point of angle " + std::to_string(vclasses_[c].angle) +
                  " is not marked");
    }
  }

  void build_triangulation() {
    cells_.clear();
    edge_cell_.assign(num_polygons(), {});
    for (int p = 0; p < num_polygons(); ++p) {
      edge_cell_[p].assign(poly_size(p), {-1, -1});
      const Polygon& poly = desc_.polygons[p];
      const int base = static_cast<int>(cells_.size());
      auto tris = triangulate(poly, tol_);
      // map (a, b) vertex pair -> (cell, side) to match diagonals
      std::map<std::pair<int, int>, std::pair<int, int>> open_diag;
      for (std::size_t t = 0; t < tris.size(); ++t) {
        TriCell cell;
        cell.poly = p;
        cell.v = tris[t].v;
        for (int s = 0; s < 3; ++s) {
          cell.x[s] = poly[cell.v[s]];
          cell.vclass[s] = vclass_[p][cell.v[s]];
          cell.nbr[s] = cell.nbr_side[s] = -1;
          cell.poly_edge[s] = -1;
        }
        const int id = base + static_cast<int>(t);
        for (int s = 0; s < 3; ++s) {
          const int a = cell.v[s], b = cell.v[(s + 1) % 3];
          if ((a + 1) % static_cast<int>(poly.size()) == b) {
            cell.poly_edge[s] = a;  // boundary side on polygon edge a
            edge_cell_[p][a] = {id, s};
          } else {
            auto it = open_diag.find({b, a});
            if (it != open_diag.end()) {
              auto [oc, os] = it->second;
              cell.nbr[s] = oc;
              cell.nbr_side[s] = os;
              cells_[oc].nbr[os] = id;
              cells_[oc].nbr_side[os] = s;
              open_diag.erase(it);
            } else {
              open_diag[{a, b}] = {id, s};
            }
          }
        }
        cells_.push_back(cell);
      }
      require(open_diag.empty(), ErrorCode::Internal, "unmatched diagonal");
    }
    // connect boundary sides through the gluings
    for (int p = 0; p < num_polygons(); ++p)
      for (int e = 0; e < poly_size(p); ++e) {
        auto [c, s] = edge_cell_[p][e];
        require(c >= 0, ErrorCode::Internal, "polygon edge lost by triangulation");
        auto [q, f] = partner_[p][e];
        auto [c2, s2] = edge_cell_[q][f];
        cells_[c].nbr[s] = c2;
        cells_[c].nbr_side[s] = s2;
      }
  }

  void build_signature() {
    const int V = static_cast<int>(vclasses_.size());
    const int E = num_edges_;
    const int F = num_polygons();
    const int chi = V - E + F;
    require((2 - chi) % 2 == 0, ErrorCode::Internal, "odd euler characteristic");
    sig_.g = (2 - chi) / 2;
    require(sig_.g >= 1, ErrorCode::GenusTooSmall,
            "genus " + std::to_string(sig_.g) + " surface; need genus >= 1");
    sig_.n = 0;
    sig_.m.clear();
    for (const Marking& mk : desc_.marked) {
      if (mk.free) ++sig_.n;
      sig_.m.push_back(mk.order);
    }
    const int total_order = std::accumulate(sig_.m.begin(), sig_.m.end(), 0);
    require(total_order == 2 * sig_.g - 2, ErrorCode::SignatureMismatch,
            "orders sum to " + std::to_string(total_order) + ", expected " +
                std::to_string(2 * sig_.g - 2));
  }
};

// Crossing into the neighbor across side s of cell c: returns the neighbor
// cell/side and the translation to add so the neighbor's chart lands in the
// current placement.  Valid for diagonal and glued sides alike.
struct CrossStep {
  int cell = -1;
  int side = -1;
  cplx shift{};
};

inline CrossStep cross_side(const Surface& S, int cell, int side, cplx placement) {
  const TriCell& t = S.cells()[cell];
  CrossStep out;
  out.cell = t.nbr[side];
  out.side = t.nbr_side[side];
  const TriCell& u = S.cells()[out.cell];
  // shared edge endpoints appear reversed on the two sides
  const cplx p1 = t.x[(side + 1) % 3] + placement;
  out.shift = p1 - u.x[out.side];
  return out;
}

// ---------------------------------------------------------------------------
// Builtin families

namespace builtins {

inline SurfaceDesc square_torus_desc() {
  SurfaceDesc d;
  d.polygons = {{cplx(0, 0), cplx(1, 0), cplx(1, 1), cplx(0, 1)}};
  d.gluings = {{{{0, 0}, {0, 2}}}, {{{0, 1}, {0, 3}}}};
  d.marked = {{0, 0, 0, true}};
  return d;
}

inline SurfaceDesc rect_torus_desc(double w, double h) {
  require(w > 0 && h > 0, ErrorCode::ParamOutOfRange,
          "rectangle sides must be positive");
  SurfaceDesc d;
  d.polygons = {{cplx(0, 0), cplx(w, 0), cplx(w, h), cplx(0, h)}};
  d.gluings = {{{{0, 0}, {0, 2}}}, {{{0, 1}, {0, 3}}}};
  d.marked = {{0, 0, 0, true}};
  return d;
}

inline SurfaceDesc regular_octagon_desc(double side) {
  require(side > 0, ErrorCode::ParamOutOfRange, "side must be positive");
  SurfaceDesc d;
  Polygon p;
  const double R = side / (2.0 * std::sin(kPi / 8.0));
  for (int k = 0; k < 8; ++k) {
    const double a = kPi / 8.0 + k * kPi / 4.0;
    p.push_back(R * cplx(std::cos(a), std::sin(a)));
  }
  d.polygons = {p};
  for (int k = 0; k < 4; ++k) d.gluings.push_back({{{0, k}, {0, k + 4}}});
  d.marked = {{0, 0, 2, false}};
  return d;
}

// Two unit-square tori slit along a centered horizontal segment of length t
// and cross-glued.  The second square may be stretched vertically to height h.
inline SurfaceDesc slit_tori_desc(double t, double h = 1.0) {
  require(t > 0 && t < 1, ErrorCode::ParamOutOfRange,
          "slit length must lie in (0, 1)");
  require(h > 0, ErrorCode::ParamOutOfRange, "height must be positive");
  const double s0 = (1.0 - t) / 2.0, s1 = (1.0 + t) / 2.0;
  SurfaceDesc d;
  auto add_torus = [&](double height) {
    const double y0 = height / 2.0;
    Polygon bottom = {cplx(0, 0),  cplx(1, 0),  cplx(1, y0),
                      cplx(s1, y0), cplx(s0, y0), cplx(0, y0)};
    Polygon top = {cplx(0, y0), cplx(s0, y0), cplx(s1, y0),
                   cplx(1, y0), cplx(1, height), cplx(0, height)};
    const int B = static_cast<int>(d.polygons.size());
    const int T = B + 1;
    d.polygons.push_back(bottom);
    d.polygons.push_back(top);
    d.gluings.push_back({{{B, 0}, {T, 4}}});  // outer bottom to outer top
    d.gluings.push_back({{{B, 1}, {B, 5}}});  // lower strip left-right
    d.gluings.push_back({{{T, 3}, {T, 5}}});  // upper strip left-right
    d.gluings.push_back({{{B, 2}, {T, 2}}});  // cut line right of the slit
    d.gluings.push_back({{{B, 4}, {T, 0}}});  // cut line left of the slit
    return std::make_pair(B, T);
  };
  auto [B0, T0] = add_torus(1.0);
  auto [B1, T1] = add_torus(h);
  d.gluings.push_back({{{B0, 3}, {T1, 1}}});  // slit, cross-glued
  d.gluings.push_back({{{B1, 3}, {T0, 1}}});
  d.marked = {{B0, 4, 1, false}, {B0, 3, 1, false}};
  return d;
}

// Adds a free marked point of order zero at a regular vertex; it is inserted
// before the existing zeros so free points stay first.
inline SurfaceDesc mark_regular_vertex(SurfaceDesc d, int poly, int vertex) {
  std::size_t pos = 0;
  while (pos < d.marked.size() && d.marked[pos].free) ++pos;
  d.marked.insert(d.marked.begin() + pos, {poly, vertex, 0, true});
  return d;
}

inline Surface make(const std::string& family, const std::vector<double>& params,
                    const Config& cfg = Config{}) {
  auto want = [&](std::size_t k) {
    require(params.size() == k, ErrorCode::ParamOutOfRange,
            family + " takes " + std::to_string(k) + " parameter(s)");
  };
  if (family == "square_torus") {
    want(0);
    return Surface(square_torus_desc(), cfg);
  }
  if (family == "rect_torus") {
    want(2);
    return Surface(rect_torus_desc(params[0], params[1]), cfg);
  }
  if (family == "regular_octagon") {
    want(1);
    return Surface(regular_octagon_desc(params[0]), cfg);
  }
  if (family == "slit_tori") {
    want(1);
    return Surface(slit_tori_desc(params[0]), cfg);
  }
  if (family == "stretched_slit_tori") {
    want(2);
    return Surface(slit_tori_desc(params[0], params[1]), cfg);
  }
  fail(ErrorCode::UnknownFamily, "no builtin family named " + family);
}

}  // namespace builtins

}  // namespace flatstrata
