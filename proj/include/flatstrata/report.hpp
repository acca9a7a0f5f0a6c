#pragma once

// Deterministic report emission.  JSON objects keep sorted keys and all
// floats are rounded to 12 significant digits before serialization; CSV
// tables carry declared headers and a fixed row order.  Running the same
// command twice yields byte-identical output.

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "flatstrata/functionals.hpp"
#include "flatstrata/hessian.hpp"
#include "flatstrata/homology.hpp"
#include "flatstrata/io.hpp"
#include "flatstrata/saddle.hpp"
#include "flatstrata/strata.hpp"
#include "flatstrata/surface.hpp"

namespace flatstrata {

inline json info_report(const Surface& S, const Config& cfg = Config{}) {
  const StratumSignature& sig = S.signature();
  json j;
  j["area"] = round12(S.area());
  j["depth"] = sig.depth();
  j["diameter"] = round12(S.diameter());
  j["genus"] = sig.g;
  j["marked_free"] = sig.n;
  j["orders"] = sig.m;
  j["period_rank"] = sig.period_rank();
  j["polygons"] = S.num_polygons();
  j["signature"] = sig.to_string();
  j["systole"] = round12(systole(S, cfg));
  return j;
}

namespace detail {

// Renders integer coefficients over edge classes as "e0 - 2*e3 + e5".
inline std::string edge_combo(const std::vector<long long>& coeffs) {
  std::string s;
  for (size_t i = 0; i < coeffs.size(); ++i) {
    long long c = coeffs[i];
    if (c == 0) continue;
    if (s.empty())
      s += c < 0 ? "-" : "";
    else
      s += c < 0 ? " - " : " + ";
    long long a = c < 0 ? -c : c;
    if (a != 1) s += std::to_string(a) + "*";
    s += "e" + std::to_string(i);
  }
  return s.empty() ? "0" : s;
}

}  // namespace detail

// Rank, basis (integer combinations of edge classes) and period vector.
inline std::string periods_report(const Surface& S,
                                  const Config& cfg = Config{}) {
  PeriodChart chart(S, cfg);
  std::ostringstream out;
  out << "# d = " << chart.rank() << "\n";
  for (int i = 0; i < chart.rank(); ++i)
    out << "# basis " << i << " = " << detail::edge_combo(chart.basis()[i])
        << "\n";
  out << "cycle_id,re,im\n";
  const Eigen::VectorXcd p = chart.periods();
  for (int i = 0; i < chart.rank(); ++i)
    out << i << "," << format12(p[i].real()) << "," << format12(p[i].imag())
        << "\n";
  return out.str();
}

// Saddle connections sorted by (length, angle), one row each.
inline std::string saddles_csv(std::vector<SaddleConnection> list) {
  std::sort(list.begin(), list.end(),
            [](const SaddleConnection& a, const SaddleConnection& b) {
              if (a.length() != b.length()) return a.length() < b.length();
              if (a.angle() != b.angle()) return a.angle() < b.angle();
              return std::make_pair(a.start_mark, a.end_mark) <
                     std::make_pair(b.start_mark, b.end_mark);
            });
  std::ostringstream out;
  out << "length,re,im,start,end\n";
  for (const SaddleConnection& sc : list)
    out << format12(sc.length()) << "," << format12(sc.holonomy.real()) << ","
        << format12(sc.holonomy.imag()) << "," << sc.start_mark << ","
        << sc.end_mark << "\n";
  return out.str();
}

namespace detail {

inline json saddle_json(const SaddleConnection& sc) {
  return json{{"end", sc.end_mark},
              {"im", round12(sc.holonomy.imag())},
              {"length", round12(sc.length())},
              {"re", round12(sc.holonomy.real())},
              {"start", sc.start_mark}};
}

inline json saddle_list_json(const std::vector<SaddleConnection>& list) {
  json arr = json::array();
  for (const SaddleConnection& sc : list) arr.push_back(saddle_json(sc));
  return arr;
}

}  // namespace detail

inline json sigma_json(const Surjection& sigma) {
  return json{{"images", sigma.image()},
              {"k", sigma.k()},
              {"l", sigma.l()},
              {"n", sigma.n()}};
}

// Report for one named functional value: the value, the quantities it is
// assembled from, the witnessing bases, and the enumeration cutoffs that
// certify them.
inline json functional_report(const Surface& S, const std::string& name,
                              const std::vector<Surjection>& sigmas,
                              const Config& cfg = Config{}) {
  json j;
  j["name"] = name;
  json comp = json::object();
  json witness = json::object();
  json cutoffs = json::object();

  auto need_sigma = [&]() -> const Surjection& {
    require(!sigmas.empty(), ErrorCode::ParamOutOfRange,
            name + " needs --sigma");
    return sigmas.front();
  };

  if (name == "area") {
    j["value"] = round12(S.area());
  } else if (name == "ell2") {
    BasisEnergy e = inv_square_basis_energy(S, cfg);
    j["value"] = round12(e.sum);
    witness["basis"] = detail::saddle_list_json(e.basis);
    cutoffs["basis_cutoff"] = round12(e.cutoff);
  } else if (name == "exhm") {
    BasisEnergy e = inv_square_basis_energy(S, cfg);
    j["value"] = round12(exh_m(S, cfg));
    comp["area"] = round12(S.area());
    comp["energy"] = round12(e.sum);
    comp["linear"] = round12(S.area() * e.sum);
    witness["basis"] = detail::saddle_list_json(e.basis);
    cutoffs["basis_cutoff"] = round12(e.cutoff);
  } else if (name == "rsigma") {
    const Surjection& s = need_sigma();
    j["value"] = round12(R_sigma(S, s, cfg));
    comp["sigma"] = sigma_json(s);
  } else if (name == "eta" || name == "zeta" || name == "exhsigma") {
    const Surjection& s = need_sigma();
    SigmaChart ch = sigma_chart(S, s, cfg);
    if (name == "eta")
      j["value"] = round12(ch.eta);
    else if (name == "zeta")
      j["value"] = round12(ch.zeta);
    else
      j["value"] = round12(exh_sigma(S, s, cfg));
    comp["R"] = round12(ch.R);
    comp["c"] = round12(ch.c);
    comp["disk_radius"] = round12(ch.disk_radius);
    comp["eta"] = round12(ch.eta);
    comp["in_U"] = ch.in_U();
    comp["in_V"] = ch.in_V;
    comp["in_disk_energy"] = round12(ch.in_disk_energy);
    comp["in_disk_rank"] = ch.in_disk_rank;
    comp["quotient_rank"] = ch.quotient_rank;
    comp["quotient_sum"] = round12(ch.quotient_sum);
    comp["sigma"] = sigma_json(s);
    comp["zeta"] = round12(ch.zeta);
    witness["in_disk_basis"] = detail::saddle_list_json(ch.in_disk_basis);
    witness["quotient_basis"] = detail::saddle_list_json(ch.quotient_basis);
    cutoffs["quotient_cutoff"] = round12(ch.cutoff);
  } else if (name == "chain") {
    require(!sigmas.empty(), ErrorCode::ParamOutOfRange,
            "chain needs at least one --sigma");
    j["value"] = round12(exh_chain(S, sigmas, cfg));
    json links = json::array();
    for (const Surjection& s : sigmas) {
      links.push_back(json{{"sigma", sigma_json(s)},
                           {"value", round12(exh_sigma(S, s, cfg))}});
    }
    comp["links"] = links;
  } else {
    fail(ErrorCode::ParamOutOfRange, "no functional named " + name);
  }

  j["components"] = comp;
  j["cutoffs"] = cutoffs;
  j["witness"] = witness;
  return j;
}

inline json hessian_report(const std::string& functional,
                           const HessianResult& res) {
  json j;
  j["consistency"] = round12(res.consistency);
  j["dimension"] = static_cast<int>(res.eigenvalues.size());
  json eigs = json::array();
  for (int i = 0; i < res.eigenvalues.size(); ++i)
    eigs.push_back(round12(res.eigenvalues[i]));
  j["eigenvalues"] = eigs;
  j["functional"] = functional;
  j["negative"] = res.negative;
  j["positive"] = res.positive;
  j["residual"] = round12(res.residual);
  j["signature"] = res.signature();
  j["spectral_radius"] = round12(res.spectral_radius);
  j["step"] = round12(res.step);
  j["zero"] = res.zero;
  return j;
}

inline json bounds_report(int g, int n) {
  CohdimBounds b = cohdim_bounds(g, n);
  json j;
  j["depth"] = b.depth;
  j["genus"] = g;
  j["harer_bound"] = b.harer;
  j["hodge_bound"] = b.hodge;
  j["looijenga_bound"] = b.looijenga;
  j["marked"] = n;
  j["moduli_bound"] = b.moduli;
  j["strata_bound"] = b.strata;
  return j;
}

// Stratification table rows; the signature field is quoted because it
// contains commas.
inline std::string strata_csv(int g, int n, int max_depth) {
  std::ostringstream out;
  out << "depth,signature,aut_order,proj_dimension\n";
  for (int depth = 0; depth <= max_depth; ++depth) {
    for (const StratumRow& row : stratification_table(g, n, depth))
      out << row.depth << ",\"" << row.signature(g).to_string() << "\","
          << row.aut << "," << row.proj_dimension << "\n";
  }
  return out.str();
}

inline std::string sweep_csv(const SweepResult& res) {
  std::ostringstream out;
  out << "param,value,flags\n";
  for (const SweepRow& row : res.rows) {
    out << format12(row.param) << ",";
    if (row.ok)
      out << format12(row.value) << ",\n";
    else
      out << "," << row.flag << "\n";
  }
  out << "# slope = " << format12(res.fit.slope) << "\n";
  out << "# intercept = " << format12(res.fit.intercept) << "\n";
  out << "# r2 = " << format12(res.fit.r2) << "\n";
  return out.str();
}

}  // namespace flatstrata
