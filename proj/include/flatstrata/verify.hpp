#pragma once

// Acceptance suite: ten end-to-end checks covering stratum recognition,
// enumeration oracles, homogeneity, Hessian signatures, convexity, the
// divergence laws, greedy optimality, the chart constants, collision
// combinatorics, and the dimension-bound arithmetic.  Every tolerance is
// pinned here; each criterion reports one pass/fail line.

#include <cmath>
#include <complex>
#include <functional>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "flatstrata/functionals.hpp"
#include "flatstrata/hessian.hpp"
#include "flatstrata/homology.hpp"
#include "flatstrata/matroid.hpp"
#include "flatstrata/saddle.hpp"
#include "flatstrata/strata.hpp"
#include "flatstrata/surface.hpp"

namespace flatstrata {
namespace verify {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = true;
  std::string detail;  // first failing check, or a short summary when green
};

namespace detail {

struct Recorder {
  bool ok = true;
  int checks = 0;
  std::string first;

  void expect(bool cond, const std::string& msg) {
    ++checks;
    if (!cond && ok) {
      ok = false;
      first = msg;
    }
  }
};

template <typename Body>
CriterionResult run(int id, const std::string& name, Body body) {
  CriterionResult res;
  res.id = id;
  res.name = name;
  Recorder rec;
  try {
    body(rec);
    res.pass = rec.ok;
    res.detail = rec.ok ? std::to_string(rec.checks) + " checks" : rec.first;
  } catch (const Error& e) {
    res.pass = false;
    res.detail = std::string("unexpected error: ") + e.what();
  }
  return res;
}

inline Surface deformed(const Surface& S, double rel, std::mt19937_64& rng,
                        const Config& cfg) {
  PeriodChart chart(S, cfg);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double s = systole(S, cfg);
  Eigen::VectorXcd delta(chart.rank());
  for (int a = 0; a < chart.rank(); ++a)
    delta[a] = rel * s * cplx(u(rng), u(rng));
  return chart.deform(delta);
}

inline std::string fmt(double x) {
  std::ostringstream ss;
  ss.precision(10);
  ss << x;
  return ss.str();
}

}  // namespace detail

// Stratum recognition on the builtin surfaces, and integer Gauss-Bonnet on
// random deformations of each.
inline CriterionResult criterion_stratum(const Config& cfg) {
  return detail::run(1, "stratum recognition and integer Gauss-Bonnet",
                     [&](detail::Recorder& rec) {
    auto sig_is = [&](const Surface& S, int g, int n, std::vector<int> m,
                      const std::string& who) {
      rec.expect(S.signature().g == g && S.signature().n == n &&
                     S.signature().m == m,
                 who + " recognized as " + S.signature().to_string());
    };
    Surface oct(builtins::regular_octagon_desc(1.0), cfg);
    Surface slit(builtins::slit_tori_desc(0.3), cfg);
    Surface torus(builtins::square_torus_desc(), cfg);
    sig_is(oct, 2, 0, {2}, "octagon");
    sig_is(slit, 2, 0, {1, 1}, "slit pair");
    // the lattice point of the torus is a free marked point of order zero
    sig_is(torus, 1, 1, {0}, "square torus");

    std::mt19937_64 rng(11);
    for (const Surface* base : {&oct, &slit, &torus}) {
      for (int trial = 0; trial < 200; ++trial) {
        Surface moved = detail::deformed(*base, 0.02, rng, cfg);
        const StratumSignature& s = moved.signature();
        int total = std::accumulate(s.m.begin(), s.m.end(), 0);
        rec.expect(total == 2 * s.g - 2,
                   "Gauss-Bonnet failed on a deformation: sum m = " +
                       std::to_string(total) + ", genus " +
                       std::to_string(s.g));
        rec.expect(s == base->signature(),
                   "deformation changed the stratum signature");
      }
    }
  });
}

// Saddle connection counts on the square torus against the primitive
// lattice vector count, exact at every cutoff.
inline CriterionResult criterion_saddle_oracle(const Config& cfg) {
  return detail::run(2, "saddle counts match the primitive lattice oracle",
                     [&](detail::Recorder& rec) {
    Surface torus(builtins::square_torus_desc(), cfg);
    auto oracle = [](double L) {
      int count = 0;
      const int M = static_cast<int>(L) + 1;
      for (int p = -M; p <= M; ++p)
        for (int q = -M; q <= M; ++q) {
          if (p == 0 && q == 0) continue;
          if (std::gcd(std::abs(p), std::abs(q)) != 1) continue;
          if (p * p + q * q <= L * L + 1e-9) ++count;
        }
      return count;
    };
    const std::vector<std::pair<double, int>> frozen = {
        {1.0, 4}, {1.5, 8}, {2.3, 16}, {5.0, -1}};
    for (auto [L, expected] : frozen) {
      const int got = static_cast<int>(enumerate_saddles(torus, L, cfg).size());
      const int want = oracle(L);
      if (expected >= 0)
        rec.expect(want == expected, "oracle drifted at L = " + detail::fmt(L));
      rec.expect(got == want, "count " + std::to_string(got) + " at L = " +
                                  detail::fmt(L) + ", oracle " +
                                  std::to_string(want));
    }
  });
}

// Scaling behavior of every functional under complex rescaling.
inline CriterionResult criterion_homogeneity(const Config& cfg) {
  return detail::run(3, "homogeneity under complex rescaling",
                     [&](detail::Recorder& rec) {
    const double tol = 1e-9;
    auto close = [&](double a, double b) {
      return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1e-12});
    };
    struct Case {
      Surface S;
      Surjection sigma;
      bool full_chart;  // eta/zeta/exh_sigma evaluable without leaving U
    };
    std::vector<Case> cases;
    cases.push_back({Surface(builtins::regular_octagon_desc(1.0), cfg),
                     Surjection(0, {0}), true});
    cases.push_back({Surface(builtins::slit_tori_desc(0.1), cfg),
                     Surjection(0, {0, 1}), true});
    cases.push_back({Surface(builtins::slit_tori_desc(0.1, 2.0), cfg),
                     Surjection(0, {0, 1}), true});
    cases.push_back({Surface(builtins::slit_tori_desc(0.004), cfg),
                     Surjection(0, {0, 0}), true});

    for (const cplx lambda : {cplx(2, 0), cplx(0, 1), cplx(0.3, 0.4)}) {
      const double a2 = std::norm(lambda);
      for (const Case& cs : cases) {
        Surface R = cs.S.rescaled(lambda, cfg);
        rec.expect(close(R.area(), a2 * cs.S.area()), "area not |lambda|^2");
        rec.expect(close(inv_square_basis_energy(R, cfg).sum,
                         inv_square_basis_energy(cs.S, cfg).sum / a2),
                   "basis energy not |lambda|^-2");
        rec.expect(close(exh_m(R, cfg), exh_m(cs.S, cfg)),
                   "exh_m not scale invariant");
        rec.expect(close(R_sigma(R, cs.sigma, cfg),
                         std::abs(lambda) * R_sigma(cs.S, cs.sigma, cfg)),
                   "R_sigma not 1-homogeneous");
        SigmaChart c0 = sigma_chart(cs.S, cs.sigma, cfg);
        SigmaChart c1 = sigma_chart(R, cs.sigma, cfg);
        rec.expect(close(c1.eta, c0.eta), "eta not scale invariant");
        rec.expect(close(c1.zeta, c0.zeta), "zeta not scale invariant");
        if (cs.full_chart && c0.in_U())
          rec.expect(close(exh_sigma(R, cs.sigma, cfg),
                           exh_sigma(cs.S, cs.sigma, cfg)),
                     "exh_sigma not scale invariant");
      }
    }
  });
}

// Signatures of the area and log-area Hessians, stability under step
// halving, and the zero count on the two-zero surface.
inline CriterionResult criterion_hessian_signatures(const Config& cfg) {
  return detail::run(4, "area Hessian signatures",
                     [&](detail::Recorder& rec) {
    auto area = [](const Surface& T) { return T.area(); };
    auto log_area = [](const Surface& T) { return std::log(T.area()); };
    Config half = cfg;
    half.fd_step_rel = cfg.fd_step_rel / 2;

    Surface oct(builtins::regular_octagon_desc(1.0), cfg);
    auto ha = complex_hessian(oct, area, cfg);
    rec.expect(ha.signature() == "(2,2,0)",
               "octagon area signature " + ha.signature());
    rec.expect(complex_hessian(oct, area, half).signature() == ha.signature(),
               "octagon area signature moved under step halving");
    auto hl = complex_hessian(oct, log_area, cfg);
    rec.expect(hl.signature() == "(1,2,1)",
               "octagon log area signature " + hl.signature());
    rec.expect(complex_hessian(oct, log_area, half).signature() ==
                   hl.signature(),
               "octagon log area signature moved under step halving");

    // with two zeros and no free marked points the radical has dimension
    // n + k - 1 = 1; the two dimension readings coincide when n = 0
    Surface slit(builtins::slit_tori_desc(0.1), cfg);
    auto hs = complex_hessian(slit, area, cfg);
    const StratumSignature& sg = slit.signature();
    const int nk1 = sg.n + sg.k() - 1;
    rec.expect(hs.zero == 1 && nk1 == 1,
               "slit pair area zero count " + std::to_string(hs.zero) +
                   ", expected n+k-1 = " + std::to_string(nk1));
    rec.expect(hs.signature() == "(2,2,1)",
               "slit pair area signature " + hs.signature());
  });
}

// Convexity at random smooth points: the exhaustion has at most g
// nonpositive directions transverse to scaling, and the basis energy is
// strictly plurisubharmonic.
inline CriterionResult criterion_convexity(const Config& cfg) {
  return detail::run(5, "convexity bounds at random smooth points",
                     [&](detail::Recorder& rec) {
    std::mt19937_64 rng(55);
    auto fexh = [](const Surface& T) { return exh_m(T); };
    auto fenergy = [](const Surface& T) {
      return inv_square_basis_energy(T).sum;
    };
    std::vector<Surface> bases;
    bases.push_back(Surface(builtins::regular_octagon_desc(1.0), cfg));
    bases.push_back(Surface(builtins::slit_tori_desc(0.1), cfg));
    bases.push_back(Surface(builtins::slit_tori_desc(0.1, 2.0), cfg));
    for (const Surface& base : bases) {
      int smooth = 0, attempts = 0;
      while (smooth < 50 && attempts < 70) {
        ++attempts;
        Surface moved = detail::deformed(base, 0.01, rng, cfg);
        try {
          auto h = complex_hessian(moved, fexh, cfg);
          rec.expect(h.zero >= 1,
                     "deformed exhaustion Hessian lost the scaling zero");
          rec.expect(projective_nonpositive(h) <= 2,
                     "more than g nonpositive directions transverse to "
                     "scaling: signature " + h.signature());
          ++smooth;
        } catch (const Error& e) {
          if (e.code() != ErrorCode::NonSmoothPoint) throw;
        }
      }
      rec.expect(smooth >= 50, "only " + std::to_string(smooth) +
                                   " smooth sample points");
      int pd = 0;
      for (int trial = 0; trial < 8; ++trial) {
        Surface moved = detail::deformed(base, 0.01, rng, cfg);
        try {
          auto h = complex_hessian(moved, fenergy, cfg);
          // raw positivity, not the banded signature: the stiff spectrum of
          // the stretched member parks its smallest eigenvalue (the long
          // vertical's curvature) below the relative zero band
          rec.expect(h.negative == 0 && h.eigenvalues[0] > 0,
                     "basis energy not positive definite: min eigenvalue " +
                         detail::fmt(h.eigenvalues[0]));
          ++pd;
        } catch (const Error& e) {
          if (e.code() != ErrorCode::NonSmoothPoint) throw;
        }
      }
      rec.expect(pd >= 5, "too few smooth energy sample points");
    }
  });
}

// The divergence laws along the builtin families and the quadrature oracle
// behind the collision integrals.
inline CriterionResult criterion_divergence(const Config& cfg) {
  return detail::run(6, "divergence laws along the families",
                     [&](detail::Recorder& rec) {
    auto sweep =
        family_sweep("slit_tori", {}, "energy", 1e-4, 1e-1, 7, true, cfg);
    rec.expect(std::abs(sweep.fit.slope + 2.0) <= 0.05,
               "slit energy log-log slope " + detail::fmt(sweep.fit.slope));
    rec.expect(sweep.fit.r2 > 0.999, "slit energy fit is not a line");

    auto stretch = family_sweep("stretched_slit_tori", {0.1}, "area", 1.0,
                                50.0, 6, false, cfg);
    rec.expect(std::abs(stretch.fit.slope - 1.0) <= 1e-6,
               "stretch area slope " + detail::fmt(stretch.fit.slope) +
                   ", expected the unit circumference");

    double prev = -std::numeric_limits<double>::infinity();
    for (double h : {1.0, 2.0, 3.0, 4.0, 6.0, 8.0}) {
      Surface S(builtins::slit_tori_desc(0.1, h), cfg);
      const double v = exh_m(S, cfg);
      rec.expect(v > prev, "exh_m not increasing along the stretch at h = " +
                               detail::fmt(h));
      prev = v;
    }

    for (double u : {0.5, 1.0, 2.0}) {
      const double got = collision_integral(1, 1, u);
      const double want = u * u * u / 6.0;
      rec.expect(std::abs(got - want) <= 1e-10 * std::max(1.0, want),
                 "quadrature oracle off at u = " + detail::fmt(u));
    }
  });
}

namespace detail {

// Sum of weights over a random maximal independent extension of the seed.
inline double random_basis_sum(const std::vector<Eigen::VectorXd>& vecs,
                               const std::vector<double>& weights,
                               SpanTracker tracker, int want,
                               std::mt19937_64& rng) {
  std::vector<int> order(vecs.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  double sum = 0.0;
  int got = 0;
  for (int idx : order) {
    if (!tracker.try_add(vecs[idx])) continue;
    sum += weights[idx];
    if (++got == want) break;
  }
  return got == want ? sum : -std::numeric_limits<double>::infinity();
}

}  // namespace detail

// Greedy functional values dominate 1000 random independent bases sampled
// from the same candidate pools.
inline CriterionResult criterion_greedy(const Config& cfg) {
  return detail::run(7, "greedy bases dominate random bases",
                     [&](detail::Recorder& rec) {
    std::mt19937_64 rng(77);
    const double slack = 1e-9;

    // basis energy on the octagon and the slit pair
    for (const char* fam : {"regular_octagon", "slit_tori"}) {
      Surface S = builtins::make(
          fam, fam[0] == 'r' ? std::vector<double>{1.0}
                             : std::vector<double>{0.1}, cfg);
      PeriodChart chart(S, cfg);
      BasisEnergy e = inv_square_basis_energy(S, cfg);
      auto pool = enumerate_saddles(S, e.cutoff, cfg);
      std::vector<Eigen::VectorXd> vecs;
      std::vector<double> weights;
      for (const auto& sc : pool) {
        vecs.push_back(connection_coords(chart, sc));
        weights.push_back(1.0 / (sc.length() * sc.length()));
      }
      double best_random = -1.0;
      for (int trial = 0; trial < 1000; ++trial) {
        double v = detail::random_basis_sum(
            vecs, weights, SpanTracker(chart.rank(), cfg.eps_rank),
            chart.rank(), rng);
        best_random = std::max(best_random, v);
        rec.expect(v <= e.sum + slack * e.sum,
                   std::string(fam) + ": random basis beat the greedy one");
      }
      rec.expect(best_random > 0, std::string(fam) + ": sampler never "
                                                     "completed a basis");
    }

    // eta and zeta pools of a merge chart with a nonempty trapped span
    {
      Surface S(builtins::slit_tori_desc(0.03), cfg);
      Surjection merge(0, {0, 0});
      SigmaChart ch = sigma_chart(S, merge, cfg);
      rec.expect(ch.in_disk_rank > 0, "merge chart trapped span is empty");
      PeriodChart chart(S, cfg);
      auto trapped = [&](const SaddleConnection& sc) {
        for (int rep : ch.reps)
          if (connection_contained_in_disk(S, sc, S.marked_classes()[rep],
                                           ch.disk_radius))
            return true;
        return false;
      };

      std::vector<Eigen::VectorXd> dvecs, qvecs;
      std::vector<double> dweights, qweights;
      for (const auto& sc : enumerate_saddles(S, 4 * ch.disk_radius, cfg))
        if (trapped(sc)) {
          dvecs.push_back(connection_coords(chart, sc));
          dweights.push_back(std::norm(sc.holonomy));
        }
      for (const auto& sc : enumerate_saddles(S, ch.cutoff, cfg))
        if (!trapped(sc)) {
          qvecs.push_back(connection_coords(chart, sc));
          qweights.push_back(1.0 / std::norm(sc.holonomy));
        }
      SpanTracker disk_seed(chart.rank(), cfg.eps_rank);
      for (const auto& v : dvecs) disk_seed.try_add(v);

      const double zeta_sum = ch.in_disk_energy;
      for (int trial = 0; trial < 1000; ++trial) {
        double v = detail::random_basis_sum(
            dvecs, dweights, SpanTracker(chart.rank(), cfg.eps_rank),
            ch.in_disk_rank, rng);
        rec.expect(v <= zeta_sum + slack * zeta_sum,
                   "random trapped basis beat the greedy trapped energy");
      }
      for (int trial = 0; trial < 1000; ++trial) {
        double v = detail::random_basis_sum(qvecs, qweights, disk_seed,
                                            ch.quotient_rank, rng);
        rec.expect(v <= ch.quotient_sum + slack * ch.quotient_sum,
                   "random quotient basis beat the greedy quotient sum");
      }
    }
  });
}

// The chart constants, finiteness inside the chart, and the blow-up on the
// way out: toward the deep stratum the linear part exceeds 1e3, toward the
// domain boundary the cutoff composite exceeds 1e3, and sampled zeta values
// at the chart exit stay above 0.9 c.
inline CriterionResult criterion_cover(const Config& cfg) {
  return detail::run(8, "chart constants and exhaustion blow-up",
                     [&](detail::Recorder& rec) {
    const Surjection id2(0, {0, 1});
    const Surjection merge(0, {0, 0});

    SigmaChart probe = sigma_chart(Surface(builtins::slit_tori_desc(0.03), cfg),
                                   merge, cfg);
    rec.expect(probe.c == 1.0 / 4096.0,
               "chart constant c is not exactly 1/4096");
    rec.expect(chi_cutoff(0.0, probe.c) == 1.0, "chi(0) != 1");
    rec.expect(chi_cutoff(probe.c / 2, probe.c) == 2.0, "chi(c/2) != 2");

    // inside the chart the value is finite and matches its composition
    {
      Surface S(builtins::slit_tori_desc(0.004), cfg);
      SigmaChart ch = sigma_chart(S, merge, cfg);
      rec.expect(ch.in_V && ch.in_U(), "t = 0.004 left the merge chart");
      const double v = exh_sigma(S, merge, cfg);
      rec.expect(std::isfinite(v) && v < 10.0,
                 "exh_sigma not small inside the chart");
      rec.expect(std::abs(v - std::log(ch.eta + chi_cutoff(ch.zeta, ch.c))) <
                     1e-12,
                 "exh_sigma does not match its composition");
    }

    // toward the collapsed configuration the identity chart's linear part
    // diverges while its own value stays the plain log of it
    {
      Surface S(builtins::slit_tori_desc(0.02), cfg);
      SigmaChart ch = sigma_chart(S, id2, cfg);
      rec.expect(ch.zeta == 0.0, "identity chart trapped something");
      rec.expect(ch.eta > 1e3, "eta = " + detail::fmt(ch.eta) +
                                   " at t = 0.02, expected > 1e3");
      const double v = exh_sigma(S, id2, cfg);
      rec.expect(std::abs(v - std::log(ch.eta + 1.0)) < 1e-12,
                 "identity exh_sigma is not log(eta + 1)");
    }

    // bisect to just inside the domain boundary zeta = c: chi blows up
    {
      auto zeta_at = [&](double t) {
        return sigma_chart(Surface(builtins::slit_tori_desc(t), cfg), merge,
                           cfg).zeta;
      };
      const double target = probe.c * (1.0 - 1e-4);
      double lo = 0.005, hi = 0.02;
      rec.expect(zeta_at(lo) < target && zeta_at(hi) > target,
                 "bisection bracket for the domain boundary is wrong");
      for (int it = 0; it < 45; ++it) {
        const double mid = (lo + hi) / 2;
        (zeta_at(mid) < target ? lo : hi) = mid;
      }
      Surface S(builtins::slit_tori_desc(lo), cfg);
      SigmaChart ch = sigma_chart(S, merge, cfg);
      rec.expect(ch.in_U(), "bisection landed outside the domain");
      const double chi = chi_cutoff(ch.zeta, ch.c);
      rec.expect(chi > 1e3, "chi = " + detail::fmt(chi) +
                                " near the domain boundary, expected > 1e3");
      rec.expect(std::isfinite(exh_sigma(S, merge, cfg)),
                 "exh_sigma not evaluable just inside the boundary");
    }

    // sampled zeta at the chart exit stays bounded below by 0.9 c
    for (double t : {0.060, 0.062, 0.0624}) {
      SigmaChart ch = sigma_chart(Surface(builtins::slit_tori_desc(t), cfg),
                                  merge, cfg);
      rec.expect(ch.in_V, "t = " + detail::fmt(t) + " already left the chart");
      rec.expect(ch.zeta >= 0.9 * ch.c,
                 "zeta = " + detail::fmt(ch.zeta) + " at chart exit, below "
                 "0.9 c");
    }
  });
}

namespace detail {

// Independent count of decreasing positive integer tuples with the given
// sum and length, all entries <= cap.
inline long long partition_count(int sum, int parts, int cap) {
  if (parts == 0) return sum == 0 ? 1 : 0;
  if (sum <= 0) return 0;
  long long total = 0;
  for (int first = std::min(sum, cap); first >= 1; --first)
    total += partition_count(sum - first, parts - 1, first);
  return total;
}

}  // namespace detail

// Collision pattern combinatorics: table counts against an independent
// partition count, the order axioms, pushforward functoriality, and the
// incomparable-chart exclusion on sampled surfaces.
inline CriterionResult criterion_combinatorics(const Config& cfg) {
  return detail::run(9, "collision pattern combinatorics",
                     [&](detail::Recorder& rec) {
    // stratification tables against brute-force partition counts
    for (int g = 2; g <= 5; ++g) {
      for (int n = 0; n <= 2; ++n) {
        const int max_depth = 2 * g - 3 + (n > 0 ? 1 : 0);
        for (int depth = 0; depth <= max_depth; ++depth) {
          const auto rows = stratification_table(g, n, depth);
          const int parts = 2 * g - 2 - depth;
          long long want = 0;
          // enumerate head vectors by total, then count tails
          std::function<void(int, int)> heads = [&](int slot, int spent) {
            if (slot == n) {
              want += detail::partition_count(2 * g - 2 - spent, parts,
                                              2 * g - 2 - spent);
              return;
            }
            for (int h = 0; spent + h <= 2 * g - 2; ++h) heads(slot + 1, spent + h);
          };
          heads(0, 0);
          rec.expect(static_cast<long long>(rows.size()) == want,
                     "table size mismatch at g=" + std::to_string(g) +
                         " n=" + std::to_string(n) +
                         " depth=" + std::to_string(depth));
          for (const StratumRow& row : rows) {
            // aut is the product of factorials of tail multiplicities
            long long aut2 = 1;
            for (size_t i = 0; i < row.tail.size();) {
              size_t j = i;
              while (j < row.tail.size() && row.tail[j] == row.tail[i]) ++j;
              for (size_t f = 2; f <= j - i; ++f) aut2 *= static_cast<long long>(f);
              i = j;
            }
            rec.expect(row.aut == aut2, "aut order mismatch in a table row");
            rec.expect(row.proj_dimension ==
                           2 * g - 2 + n + static_cast<int>(row.tail.size()),
                       "projective dimension mismatch in a table row");
          }
        }
      }
    }

    // order axioms and pushforward functoriality, exhaustively for small
    // point counts
    const std::vector<std::pair<int, int>> shapes = {
        {0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 1}, {1, 2}, {1, 3}, {2, 2}};
    for (auto [n, k] : shapes) {
      const auto all = enumerate_all_surjections(n, k);
      std::vector<int> m(n + k);
      for (int i = 0; i < n + k; ++i) m[i] = i + 1;
      for (const auto& a : all) {
        rec.expect(leq(a, a), "reflexivity failed");
        for (const auto& b : all) {
          if (leq(a, b) && leq(b, a))
            rec.expect(a == b, "antisymmetry failed");
          if (leq(a, b)) {
            // a is the coarser pattern: an induced map r on the finer
            // pattern's targets satisfies r . b = a, and pushing forward
            // through b then r must agree with pushing through a
            std::vector<int> rho(b.n() + b.l(), -1);
            bool single = true;
            for (int i = 0; i < b.size(); ++i) {
              if (rho[b(i)] == -1)
                rho[b(i)] = a(i);
              else if (rho[b(i)] != a(i))
                single = false;
            }
            rec.expect(single, "order relation without an induced map");
            if (single) {
              Surjection r(b.n(), rho);
              rec.expect(r.pushforward(b.pushforward(m)) == a.pushforward(m),
                         "pushforward functoriality failed");
            }
          }
          for (const auto& c : all)
            if (leq(a, b) && leq(b, c))
              rec.expect(leq(a, c), "transitivity failed");
        }
      }
    }

    // incomparable charts never both contain a sampled surface
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> ts(0.005, 0.45);
    for (int trial = 0; trial < 100; ++trial) {
      Surface S(builtins::mark_regular_vertex(
                    builtins::slit_tori_desc(ts(rng)), 0, 5), cfg);
      auto probe2 = cover_adaptedness_probe(S, cfg);
      rec.expect(probe2.incomparable > 0, "no incomparable pairs probed");
      rec.expect(probe2.violations == 0,
                 "incomparable charts both active on a sample");
    }
  });
}

// The closed-form dimension bounds, exact over a grid.
inline CriterionResult criterion_bounds(const Config&) {
  return detail::run(10, "dimension bound arithmetic",
                     [&](detail::Recorder& rec) {
    for (int g = 2; g <= 20; ++g) {
      for (int n = 0; n <= 20; ++n) {
        const int eps = n > 0 ? 1 : 0;
        CohdimBounds b = cohdim_bounds(g, n);
        rec.expect(b.moduli == 2 * g - 2 + eps, "moduli bound wrong");
        rec.expect(b.hodge == 3 * g - 3 + eps, "hodge bound wrong");
        rec.expect(b.strata == g, "stratum bound wrong");
        rec.expect(b.depth == 2 * g - 3 + eps, "chain depth wrong");
        rec.expect(b.hodge == b.strata + b.depth,
                   "hodge bound is not stratum bound plus depth");
      }
    }
  });
}

inline std::vector<CriterionResult> run_acceptance(const Config& cfg,
                                                   std::ostream* out = nullptr) {
  std::vector<CriterionResult> results;
  const std::vector<std::function<CriterionResult(const Config&)>> criteria = {
      criterion_stratum,   criterion_saddle_oracle,
      criterion_homogeneity, criterion_hessian_signatures,
      criterion_convexity, criterion_divergence,
      criterion_greedy,    criterion_cover,
      criterion_combinatorics, criterion_bounds};
  for (const auto& crit : criteria) {
    CriterionResult res = crit(cfg);
    if (out)
      *out << (res.pass ? "PASS" : "FAIL") << "  " << res.id << ". "
           << res.name << " (" << res.detail << ")" << std::endl;
    results.push_back(std::move(res));
  }
  return results;
}

}  // namespace verify
}  // namespace flatstrata
