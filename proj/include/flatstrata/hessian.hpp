#pragma once

// Complex Hessians of functionals in period coordinates, eigenvalue
// signatures, and parameter sweeps with straight-line fits.
//
// A functional F is sampled on deformations of the surface along the real
// and imaginary parts of the period basis directions; central second
// differences assemble the Levi form H_ab = dd F / dz_a dz_bar_b.  The
// computation runs at step h and h/2: for a smooth F the two agree to
// O(h^2), while across a corner of a max-type functional the second
// difference scales like 1/h, so gross disagreement flags a non-smooth
// point instead of returning a garbage signature.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "flatstrata/common.hpp"
#include "flatstrata/functionals.hpp"
#include "flatstrata/homology.hpp"
#include "flatstrata/saddle.hpp"
#include "flatstrata/surface.hpp"

namespace flatstrata {

using Functional = std::function<double(const Surface&)>;

struct HessianResult {
  Eigen::MatrixXcd H;           // Hermitian part of the sampled Levi form
  Eigen::VectorXd eigenvalues;  // ascending
  int positive = 0;
  int negative = 0;
  int zero = 0;
  double step = 0.0;
  double spectral_radius = 0.0;
  double consistency = 0.0;  // eigenvalue disagreement between h and h/2
  double residual = 0.0;     // Hermitian defect of the assembled form

  int nonpositive() const { return negative + zero; }
  std::string signature() const {
    return "(" + std::to_string(positive) + "," + std::to_string(negative) +
           "," + std::to_string(zero) + ")";
  }
};

namespace detail {

inline Eigen::MatrixXcd fd_levi_form(const PeriodChart& chart,
                                     const Functional& F, double h) {
  const int d = chart.rank();
  // real directions: 2a is the real part of basis direction a, 2a+1 the
  // imaginary part; displacements are cached by their integer stencil key
  std::map<std::vector<int>, double> cache;
  auto value = [&](const std::vector<int>& key) {
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    Eigen::VectorXcd delta = Eigen::VectorXcd::Zero(d);
    for (int u = 0; u < 2 * d; ++u) {
      if (!key[u]) continue;
      const cplx dir = (u % 2) ? cplx(0.0, 1.0) : cplx(1.0, 0.0);
      delta[u / 2] += static_cast<double>(key[u]) * h * dir;
    }
    const double v = F(chart.deform(delta));
    cache.emplace(key, v);
    return v;
  };
  auto second = [&](int u, int v) {
    std::vector<int> key(2 * d, 0);
    auto probe = [&](int su, int sv) {
      key.assign(2 * d, 0);
      key[u] += su;
      key[v] += sv;
      return value(key);
    };
    return (probe(1, 1) - probe(1, -1) - probe(-1, 1) + probe(-1, -1)) /
           (4.0 * h * h);
  };
  Eigen::MatrixXcd H(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = a; b < d; ++b) {
      const double rxx = second(2 * a, 2 * b);
      const double ryy = second(2 * a + 1, 2 * b + 1);
      const double rxy = second(2 * a, 2 * b + 1);
      const double ryx = second(2 * a + 1, 2 * b);
      H(a, b) = 0.25 * cplx(rxx + ryy, rxy - ryx);
      H(b, a) = std::conj(H(a, b));
    }
  return 0.5 * (H + H.adjoint().eval());
}

inline Eigen::VectorXd hermitian_eigs(const Eigen::MatrixXcd& H) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
  require(es.info() == Eigen::Success, ErrorCode::Internal,
          "eigenvalue iteration failed");
  return es.eigenvalues();
}

}  // namespace detail

inline HessianResult complex_hessian(const Surface& S, const Functional& F,
                                     const Config& cfg = Config{}) {
  const PeriodChart chart(S, cfg);
  HessianResult res;
  res.step = cfg.fd_step_rel * systole(S, cfg);
  const Eigen::MatrixXcd coarse = detail::fd_levi_form(chart, F, res.step);
  res.H = detail::fd_levi_form(chart, F, res.step / 2);
  res.residual = (res.H - res.H.adjoint()).norm();
  const Eigen::VectorXd e1 = detail::hermitian_eigs(coarse);
  res.eigenvalues = detail::hermitian_eigs(res.H);
  res.spectral_radius = std::max(std::abs(res.eigenvalues[0]),
                                 std::abs(res.eigenvalues[res.eigenvalues.size() - 1]));
  const double scale = std::max(res.spectral_radius, 1e-300);
  res.consistency = (res.eigenvalues - e1).cwiseAbs().maxCoeff() / scale;
  require(res.spectral_radius == 0.0 || res.consistency <= 0.25,
          ErrorCode::NonSmoothPoint,
          "second differences do not stabilize under step halving; the "
          "functional has a corner here");
  const double band = cfg.tol_eig_rel * res.spectral_radius;
  for (int i = 0; i < res.eigenvalues.size(); ++i) {
    const double l = res.eigenvalues[i];
    if (std::abs(l) <= band)
      ++res.zero;
    else if (l > 0)
      ++res.positive;
    else
      ++res.negative;
  }
  return res;
}

// Residual of the Hessian applied to the scaling direction, relative to the
// spectral radius.  With H_ab = dd F / dz_a dz_bar_b, a functional that is a
// log of a separately homogeneous quantity satisfies H conj(z) = 0 exactly
// (the antiholomorphic Euler field is annihilated), so the conjugate period
// vector is the direction to test.
inline double scaling_direction_residual(const Surface& S,
                                         const HessianResult& res,
                                         const Config& cfg = Config{}) {
  const Eigen::VectorXcd v = PeriodChart(S, cfg).periods().conjugate();
  const double denom = std::max(res.spectral_radius * v.norm(), 1e-300);
  return (res.H * v).norm() / denom;
}

// Nonpositive eigenvalue count after quotienting by the scaling action.  A
// scale-invariant functional on the period cone always carries one zero
// along the scaling direction; on the projectivized stratum, where the
// convexity statements live, that direction does not exist, so the bound
// "at most g nonpositive" is checked against this count.
inline int projective_nonpositive(const HessianResult& res) {
  require(res.zero >= 1, ErrorCode::RankMismatch,
          "no scaling zero to quotient away");
  return res.nonpositive() - 1;
}

// ---------------------------------------------------------------------------
// Bundled convexity report for the standard functionals

struct ConvexityReport {
  HessianResult area;       // the flat area form
  HessianResult log_area;
  HessianResult energy;     // inverse-square basis energy
  HessianResult exh;        // log of area times energy
  double log_area_scaling = 0.0;  // scaling-direction residuals
  double exh_scaling = 0.0;
};

inline ConvexityReport convexity_check(const Surface& S,
                                       const Config& cfg = Config{}) {
  ConvexityReport rep;
  rep.area = complex_hessian(S, [](const Surface& T) { return T.area(); }, cfg);
  rep.log_area = complex_hessian(
      S, [](const Surface& T) { return std::log(T.area()); }, cfg);
  rep.energy = complex_hessian(
      S, [&](const Surface& T) { return inv_square_basis_energy(T, cfg).sum; },
      cfg);
  rep.exh = complex_hessian(
      S, [&](const Surface& T) { return exh_m(T, cfg); }, cfg);
  rep.log_area_scaling = scaling_direction_residual(S, rep.log_area, cfg);
  rep.exh_scaling = scaling_direction_residual(S, rep.exh, cfg);
  return rep;
}

// ---------------------------------------------------------------------------
// Parameter sweeps

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

inline LineFit fit_line(const std::vector<double>& x,
                        const std::vector<double>& y) {
  require(x.size() == y.size() && x.size() >= 2, ErrorCode::SizeMismatch,
          "need at least two points to fit a line");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
  }
  const double vx = sxx - sx * sx / n;
  const double vy = syy - sy * sy / n;
  const double cxy = sxy - sx * sy / n;
  require(vx > 0, ErrorCode::ZeroScalar, "sweep parameter does not vary");
  LineFit f;
  f.slope = cxy / vx;
  f.intercept = (sy - f.slope * sx) / n;
  f.r2 = vy > 0 ? (cxy * cxy) / (vx * vy) : 1.0;
  return f;
}

inline double measure_quantity(const Surface& S, const std::string& quantity,
                               const Config& cfg = Config{}) {
  if (quantity == "area") return S.area();
  if (quantity == "systole") return systole(S, cfg);
  if (quantity == "loop") return shortest_loop(S, cfg).length;
  if (quantity == "diameter") return S.diameter();
  if (quantity == "energy") return inv_square_basis_energy(S, cfg).sum;
  if (quantity == "exh_m_linear") return exh_m_linear(S, cfg);
  if (quantity == "exh_m") return exh_m(S, cfg);
  fail(ErrorCode::ParamOutOfRange, "no quantity named " + quantity);
}

struct SweepRow {
  double param = 0.0;
  double value = 0.0;
  bool ok = true;
  std::string flag;  // error name when the point failed; the fit skips it
};

struct SweepResult {
  std::string family;
  std::string quantity;
  bool loglog = false;
  std::vector<SweepRow> rows;
  LineFit fit;  // on log-log axes when loglog is set
};

// Sweeps the last constructor parameter of a builtin family over [from, to]
// (geometric spacing on log-log axes) and fits a line to the measured
// quantity.
inline SweepResult family_sweep(const std::string& family,
                                std::vector<double> base_params,
                                const std::string& quantity, double from,
                                double to, int points, bool loglog,
                                const Config& cfg = Config{}) {
  require(points >= 2, ErrorCode::ParamOutOfRange, "need at least two points");
  require(from > 0 && to > 0 && from != to, ErrorCode::ParamOutOfRange,
          "sweep endpoints must be positive and distinct");
  {
    static const std::vector<std::string> known = {
        "area",   "systole", "loop",  "diameter",
        "energy", "exh_m_linear", "exh_m"};
    require(std::find(known.begin(), known.end(), quantity) != known.end(),
            ErrorCode::ParamOutOfRange, "no quantity named " + quantity);
  }
  SweepResult out;
  out.family = family;
  out.quantity = quantity;
  out.loglog = loglog;
  std::vector<double> xs, ys;
  for (int i = 0; i < points; ++i) {
    const double s = static_cast<double>(i) / (points - 1);
    const double t = loglog ? from * std::pow(to / from, s)
                            : from + (to - from) * s;
    auto params = base_params;
    params.push_back(t);
    SweepRow row;
    row.param = t;
    try {
      Surface S = builtins::make(family, params, cfg);
      row.value = measure_quantity(S, quantity, cfg);
    } catch (const Error& e) {
      row.ok = false;
      row.flag = error_name(e.code());
    }
    if (row.ok) {
      xs.push_back(loglog ? std::log(t) : t);
      ys.push_back(loglog ? std::log(row.value) : row.value);
    }
    out.rows.push_back(std::move(row));
  }
  require(xs.size() >= 2, ErrorCode::RankDeficient,
          "fewer than two sweep points evaluated cleanly");
  out.fit = fit_line(xs, ys);
  return out;
}

}  // namespace flatstrata
