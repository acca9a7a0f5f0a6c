#pragma once

// Exhaustion functionals on strata of translation surfaces.
//
// The basic functional is area times the largest sum of inverse square
// lengths over a homology basis realized by saddle connections; it blows up
// exactly when some connection degenerates, so its log exhausts the stratum.
// Near mark collisions it loses control, and per merge pattern sigma a
// corrected functional is used: a quotient-basis energy (eta) plus a cutoff
// reshaping of a collision energy (zeta) that diverges on the boundary of
// the chart where the correction is valid.  Chains of merge patterns sum
// these into functions adapted to the nerve of the cover.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "flatstrata/common.hpp"
#include "flatstrata/homology.hpp"
#include "flatstrata/matroid.hpp"
#include "flatstrata/saddle.hpp"
#include "flatstrata/strata.hpp"
#include "flatstrata/surface.hpp"

namespace flatstrata {

// ---------------------------------------------------------------------------
// Quadrature and the local collision period

inline void gauss_legendre(int n, std::vector<double>& x,
                           std::vector<double>& w) {
  require(n >= 1, ErrorCode::ParamOutOfRange, "quadrature order must be >= 1");
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double t = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = t;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2 * j - 1) * t * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    x[i] = -t;
    x[n - 1 - i] = t;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
}

// |integral_0^u z^{m1} (z-u)^{m2} dz|: the absolute period of the local
// model of two zeros of orders m1, m2 colliding at distance u.
inline double collision_integral(int m1, int m2, double u) {
  require(m1 >= 0 && m2 >= 0, ErrorCode::ParamOutOfRange,
          "orders must be nonnegative");
  require(u >= 0, ErrorCode::ParamOutOfRange, "separation must be >= 0");
  if (u == 0) return 0.0;
  const int n = std::max(8, m1 + m2);
  std::vector<double> x, w;
  gauss_legendre(n, x, w);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = u * (x[i] + 1.0) / 2.0;
    acc += w[i] * std::pow(z, m1) * std::pow(z - u, m2);
  }
  return std::abs(acc * u / 2.0);
}

// ---------------------------------------------------------------------------
// The basic inverse-square basis energy

struct BasisEnergy {
  double sum = 0.0;    // sum of 1/len^2 over the optimal basis
  double cutoff = 0.0; // enumeration length that certified optimality
  std::vector<SaddleConnection> basis;
};

// Greedy maximum of sum 1/len^2 over bases of relative homology realized by
// saddle connections.  Connections arrive sorted by length, so the greedy
// pick is optimal over everything enumerated; once the basis completes at
// length <= cutoff, longer connections carry smaller weight and cannot
// improve it, which certifies the maximum over the full (infinite) family.
inline BasisEnergy inv_square_basis_energy(const Surface& S,
                                           const Config& cfg = Config{}) {
  const PeriodChart chart(S, cfg);
  const int d = chart.rank();
  double L = 2 * systole(S, cfg);
  for (int it = 0; it < 64; ++it) {
    const auto conns = enumerate_saddles(S, L, cfg);
    std::vector<Eigen::VectorXd> vecs;
    std::vector<double> weights;
    vecs.reserve(conns.size());
    weights.reserve(conns.size());
    for (const auto& sc : conns) {
      vecs.push_back(connection_coords(chart, sc));
      weights.push_back(1.0 / sq(sc.length()));
    }
    const auto res = greedy_max_weight_basis(vecs, weights, d,
                                             SpanTracker(d, cfg.eps_rank));
    if (res.complete) {
      BasisEnergy out;
      out.sum = res.total;
      out.cutoff = L;
      for (int i : res.picked) out.basis.push_back(conns[i]);
      return out;
    }
    L *= 1.7;
  }
  fail(ErrorCode::RankDeficient,
       "saddle connections failed to span relative homology");
}

inline double exh_m_linear(const Surface& S, const Config& cfg = Config{}) {
  return S.area() * inv_square_basis_energy(S, cfg).sum;
}

inline double exh_m(const Surface& S, const Config& cfg = Config{}) {
  return std::log(exh_m_linear(S, cfg));
}

// ---------------------------------------------------------------------------
// Mark geometry shared by the per-sigma charts

struct MarkGeometry {
  Eigen::MatrixXd dist;  // certified pairwise distances between marks
  double loop = 0.0;     // shortest closed geodesic candidate
  bool loop_warning = false;
};

inline MarkGeometry mark_geometry(const Surface& S,
                                  const Config& cfg = Config{}) {
  const int nm = S.num_marked();
  MarkGeometry g;
  g.dist = Eigen::MatrixXd::Zero(nm, nm);
  for (int i = 0; i < nm; ++i)
    for (int j = i + 1; j < nm; ++j)
      g.dist(i, j) = g.dist(j, i) = marked_distance(S, i, j, cfg);
  const auto loop = shortest_loop(S, cfg);
  g.loop = loop.length;
  g.loop_warning = loop.warning;
  return g;
}

namespace detail {

inline void check_sigma_shape(const Surface& S, const Surjection& sigma) {
  require(sigma.size() == S.num_marked() && sigma.n() == S.signature().n,
          ErrorCode::SignatureMismatch,
          "merge pattern does not match the marked points");
}

inline double r_sigma(const MarkGeometry& geom, const Surjection& sigma) {
  double m = geom.loop;
  for (int i = 0; i < sigma.size(); ++i)
    for (int j = i + 1; j < sigma.size(); ++j)
      if (sigma(i) != sigma(j)) m = std::min(m, geom.dist(i, j));
  return 0.5 * m;
}

inline bool in_v_sigma(const MarkGeometry& geom, const Surjection& sigma,
                       double disk_radius) {
  if (!(disk_radius > 0)) return false;
  const auto reps = sigma.fiber_representatives();
  for (int i = 0; i < sigma.size(); ++i) {
    const int rep = reps[sigma(i)];
    if (i == rep) continue;
    if (!(geom.dist(i, rep) < disk_radius)) return false;
  }
  return true;
}

}  // namespace detail

// Safety radius of the merge pattern: half the smallest distance separating
// marks of distinct targets, capped by half the shortest loop.
inline double R_sigma(const Surface& S, const Surjection& sigma,
                      const Config& cfg = Config{}) {
  detail::check_sigma_shape(S, sigma);
  return detail::r_sigma(mark_geometry(S, cfg), sigma);
}

inline bool in_V_sigma(const Surface& S, const Surjection& sigma,
                       const Config& cfg = Config{}) {
  detail::check_sigma_shape(S, sigma);
  const auto geom = mark_geometry(S, cfg);
  const double R = detail::r_sigma(geom, sigma);
  const int denom = 2 * S.genus() + S.signature().n;
  return detail::in_v_sigma(geom, sigma, R / (2 * denom));
}

// ---------------------------------------------------------------------------
// Per-sigma chart data

struct SigmaChart {
  Surjection sigma;
  double R = 0.0;
  double disk_radius = 0.0;  // R / (2 (2g + n))
  double c = 0.0;            // domain constant 1 / (16 (2g + n)^4)
  bool in_V = false;
  std::vector<int> reps;  // representative mark index per target

  int in_disk_rank = 0;
  int quotient_rank = 0;
  double in_disk_energy = 0.0;  // sum |holonomy|^2 over the in-disk basis
  double quotient_sum = 0.0;    // sum 1/len^2 over the quotient basis
  double eta = 0.0;             // area * quotient_sum
  double zeta = 0.0;            // in_disk_energy * quotient_sum
  double cutoff = 0.0;          // length certifying the quotient basis

  std::vector<SaddleConnection> in_disk_basis;
  std::vector<SaddleConnection> quotient_basis;

  // The shrunk piece sits inside the chart by construction, so membership
  // requires both the geometric disk condition and the small-energy bound.
  bool in_U() const { return in_V && zeta < c; }
};

// Assemble the chart of a merge pattern: collision disks around fiber
// representatives, the energy of segments trapped in the disks, and the
// inverse-square energy of a basis of homology modulo the in-disk span,
// drawn from connections that leave the disks.
inline SigmaChart sigma_chart(const Surface& S, const Surjection& sigma,
                              const Config& cfg = Config{}) {
  detail::check_sigma_shape(S, sigma);
  SigmaChart ch{sigma};
  const auto geom = mark_geometry(S, cfg);
  const int denom = 2 * S.genus() + S.signature().n;
  ch.R = detail::r_sigma(geom, sigma);
  ch.disk_radius = ch.R / (2 * denom);
  ch.c = 1.0 / (16.0 * std::pow(static_cast<double>(denom), 4));
  ch.in_V = detail::in_v_sigma(geom, sigma, ch.disk_radius);
  ch.reps = sigma.fiber_representatives();

  const PeriodChart chart(S, cfg);
  const int d = chart.rank();

  auto trapped = [&](const SaddleConnection& sc) {
    for (int rep : ch.reps)
      if (connection_contained_in_disk(S, sc, S.marked_classes()[rep],
                                       ch.disk_radius))
        return true;
    return false;
  };

  // every segment inside a disk has length <= 2 * disk_radius, so this pool
  // is a complete listing of the trapped segments
  std::vector<SaddleConnection> in_disk;
  for (const auto& sc : enumerate_saddles(S, 4 * ch.disk_radius, cfg))
    if (trapped(sc)) in_disk.push_back(sc);

  SpanTracker disk_span(d, cfg.eps_rank);
  for (const auto& sc : in_disk) disk_span.try_add(connection_coords(chart, sc));
  ch.in_disk_rank = disk_span.rank();

  {
    std::vector<int> order(in_disk.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return in_disk[a].length() > in_disk[b].length();
    });
    std::vector<Eigen::VectorXd> vecs;
    std::vector<double> weights;
    for (int i : order) {
      vecs.push_back(connection_coords(chart, in_disk[i]));
      weights.push_back(sq(in_disk[i].length()));
    }
    const auto res =
        greedy_max_weight_basis(vecs, weights, -1, SpanTracker(d, cfg.eps_rank));
    ch.in_disk_energy = res.total;
    for (int i : res.picked) ch.in_disk_basis.push_back(in_disk[order[i]]);
  }

  const int want = d - ch.in_disk_rank;
  double L = 2 * systole(S, cfg);
  for (int it = 0; it < 64; ++it) {
    const auto conns = enumerate_saddles(S, L, cfg);
    std::vector<Eigen::VectorXd> vecs;
    std::vector<double> weights;
    std::vector<int> keep;
    for (int i = 0; i < static_cast<int>(conns.size()); ++i) {
      if (trapped(conns[i])) continue;
      keep.push_back(i);
      vecs.push_back(connection_coords(chart, conns[i]));
      weights.push_back(1.0 / sq(conns[i].length()));
    }
    const auto res = greedy_max_weight_basis(vecs, weights, want, disk_span);
    if (res.complete) {
      ch.quotient_rank = want;
      ch.quotient_sum = res.total;
      ch.cutoff = L;
      for (int i : res.picked) ch.quotient_basis.push_back(conns[keep[i]]);
      break;
    }
    L *= 1.7;
    require(it + 1 < 64, ErrorCode::RankDeficient,
            "connections leaving the disks failed to span the quotient");
  }

  ch.eta = S.area() * ch.quotient_sum;
  ch.zeta = ch.in_disk_energy * ch.quotient_sum;
  return ch;
}

// Cutoff reshaping: finite at 0, diverges as x -> c from below.
inline double chi_cutoff(double x, double c) {
  require(x < c, ErrorCode::ZetaOutOfDomain,
          "collision energy is outside the chart domain");
  return c / (c - x);
}

inline double exh_sigma(const Surface& S, const Surjection& sigma,
                        const Config& cfg = Config{},
                        bool require_cover = false) {
  const auto ch = sigma_chart(S, sigma, cfg);
  if (require_cover)
    require(ch.in_V, ErrorCode::NotInCover,
            "surface is not in the chart of this merge pattern");
  return std::log(ch.eta + chi_cutoff(ch.zeta, ch.c));
}

// Sum of the per-pattern functions over a strictly decreasing chain.  The
// number of strict descents is bounded by the stratum depth.
inline double exh_chain(const Surface& S, const std::vector<Surjection>& chain,
                        const Config& cfg = Config{}) {
  require(!chain.empty(), ErrorCode::ParamOutOfRange, "empty chain");
  for (const auto& s : chain) detail::check_sigma_shape(S, s);
  const int depth = S.signature().depth();
  require(static_cast<int>(chain.size()) - 1 <= depth, ErrorCode::ChainTooDeep,
          "chain has more descents than the stratum depth");
  for (std::size_t i = 0; i + 1 < chain.size(); ++i)
    require(lt(chain[i + 1], chain[i]), ErrorCode::ChainNotDecreasing,
            "chain is not strictly decreasing");
  double acc = 0.0;
  for (const auto& s : chain) acc += exh_sigma(S, s, cfg);
  return acc;
}

// ---------------------------------------------------------------------------
// Cover adaptedness probe

struct AdaptednessProbe {
  int pairs = 0;
  int incomparable = 0;
  int violations = 0;  // incomparable pairs with both charts active
};

// The charts of two incomparable merge patterns should never both contain
// the surface; a violation means the chart radii are too generous for a
// cover indexed by chains.
inline AdaptednessProbe cover_adaptedness_probe(const Surface& S,
                                               const Config& cfg = Config{}) {
  const auto sig = S.signature();
  const int n = sig.n;
  const int k = S.num_marked() - n;
  const auto sigmas = enumerate_all_surjections(n, k);
  const auto geom = mark_geometry(S, cfg);
  const int denom = 2 * S.genus() + n;
  std::vector<char> inv(sigmas.size(), 0);
  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    const double R = detail::r_sigma(geom, sigmas[i]);
    inv[i] = detail::in_v_sigma(geom, sigmas[i], R / (2 * denom)) ? 1 : 0;
  }
  AdaptednessProbe probe;
  for (std::size_t i = 0; i < sigmas.size(); ++i)
    for (std::size_t j = i + 1; j < sigmas.size(); ++j) {
      ++probe.pairs;
      if (comparable(sigmas[i], sigmas[j])) continue;
      ++probe.incomparable;
      if (inv[i] && inv[j]) ++probe.violations;
    }
  return probe;
}

}  // namespace flatstrata
