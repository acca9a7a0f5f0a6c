#pragma once

// Subcommand dispatch for the flatstrata binary.  Each subcommand loads or
// generates a surface, runs one module operation, and emits a deterministic
// report.  Exit codes: 0 success, 2 rejected input, 3 a computation that
// gave up (budget or tolerance), 1 acceptance failures under `verify`.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "flatstrata/io.hpp"
#include "flatstrata/report.hpp"
#include "flatstrata/verify.hpp"

namespace flatstrata {

namespace detail {

inline Surjection parse_sigma(const std::string& text, int n) {
  std::vector<int> images;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t used = 0;
      images.push_back(std::stoi(item, &used));
      require(used == item.size(), ErrorCode::BadFlag, "bad --sigma entry");
    } catch (const std::logic_error&) {
      fail(ErrorCode::BadFlag, "--sigma wants comma-separated integers, got " +
                                   text);
    }
  }
  return Surjection(n, images);
}

inline std::vector<double> parse_params(const std::string& text) {
  std::vector<double> params;
  if (text.empty()) return params;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t used = 0;
      params.push_back(std::stod(item, &used));
      require(used == item.size(), ErrorCode::BadFlag, "bad --params entry");
    } catch (const std::logic_error&) {
      fail(ErrorCode::BadFlag, "--params wants comma-separated numbers, got " +
                                   text);
    }
  }
  return params;
}

inline void write_text(const std::string& text, const std::string& path,
                       std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path);
  require(f.good(), ErrorCode::BadFile, "cannot write " + path);
  f << text;
}

inline Functional named_functional(const std::string& name,
                                   const std::vector<Surjection>& sigmas,
                                   const Config& cfg) {
  if (name == "area") return [](const Surface& T) { return T.area(); };
  if (name == "log_area")
    return [](const Surface& T) { return std::log(T.area()); };
  if (name == "energy" || name == "ell2")
    return [cfg](const Surface& T) {
      return inv_square_basis_energy(T, cfg).sum;
    };
  if (name == "exhm" || name == "exh_m")
    return [cfg](const Surface& T) { return exh_m(T, cfg); };
  if (name == "exhsigma" || name == "exh_sigma") {
    require(!sigmas.empty(), ErrorCode::BadFlag, name + " needs --sigma");
    Surjection s = sigmas.front();
    return [cfg, s](const Surface& T) { return exh_sigma(T, s, cfg); };
  }
  fail(ErrorCode::BadFlag, "no functional named " + name);
}

}  // namespace detail

inline int cli_main(int argc, const char* const* argv,
                    std::ostream& out = std::cout,
                    std::ostream& err = std::cerr) {
  CLI::App app{"translation surface strata toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  long long budget = -1;
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--budget", budget, "search node budget");

  std::string file, csv_path, name, family, sigma_first, params_text, out_path;
  std::vector<std::string> sigma_texts;
  double max_length = 0, from = 0, to = 0, step = -1, tol = -1;
  int steps = 0, genus = 0, marked = 0, depth = -1;
  bool force_loglog = false, force_linear = false;

  auto* c_validate = app.add_subcommand("validate", "check a surface file");
  c_validate->add_option("file", file)->required();

  auto* c_info = app.add_subcommand("info", "summarize a surface");
  c_info->add_option("file", file)->required();

  auto* c_periods =
      app.add_subcommand("periods", "homology basis and period vector");
  c_periods->add_option("file", file)->required();

  auto* c_saddles =
      app.add_subcommand("saddles", "enumerate saddle connections");
  c_saddles->add_option("file", file)->required();
  c_saddles->add_option("--max-length", max_length, "length cutoff")
      ->required();
  c_saddles->add_option("--csv", csv_path, "write CSV here");

  auto* c_functional =
      app.add_subcommand("functional", "evaluate a named functional");
  c_functional->add_option("file", file)->required();
  c_functional
      ->add_option("--name", name,
                   "area|ell2|exhm|rsigma|eta|zeta|exhsigma|chain")
      ->required();
  c_functional->add_option("--sigma", sigma_texts,
                           "collision pattern images, comma separated; "
                           "repeat for a chain");

  auto* c_hessian =
      app.add_subcommand("hessian", "finite-difference complex Hessian");
  c_hessian->add_option("file", file)->required();
  c_hessian
      ->add_option("--functional", name,
                   "area|log_area|energy|exhm|exhsigma")
      ->required();
  c_hessian->add_option("--sigma", sigma_first, "collision pattern images");
  c_hessian->add_option("--step", step, "absolute finite-difference step");
  c_hessian->add_option("--tol", tol, "relative eigenvalue zero band");

  auto* c_sweep = app.add_subcommand("sweep", "parameter sweep with a fit");
  c_sweep->add_option("--family", family, "slit|stretch|rect")->required();
  c_sweep->add_option("--from", from)->required();
  c_sweep->add_option("--to", to)->required();
  c_sweep->add_option("--steps", steps)->required();
  c_sweep->add_option("--functional", name, "quantity to measure")->required();
  c_sweep->add_option("--csv", csv_path, "write CSV here");
  c_sweep->add_flag("--loglog", force_loglog, "fit on log-log axes");
  c_sweep->add_flag("--linear", force_linear, "fit on linear axes");

  auto* c_bounds = app.add_subcommand("bounds", "dimension bounds");
  c_bounds->add_option("--genus", genus)->required();
  c_bounds->add_option("--marked", marked, "labeled points")->capture_default_str();

  auto* c_strata = app.add_subcommand("strata", "stratification table");
  c_strata->add_option("--genus", genus)->required();
  c_strata->add_option("--marked", marked, "labeled points")->capture_default_str();
  c_strata->add_option("--depth", depth, "maximal table depth");

  auto* c_gen = app.add_subcommand("gen", "write a builtin surface file");
  c_gen->add_option("--family", family, "builtin family name")->required();
  c_gen->add_option("--params", params_text, "comma separated parameters");
  c_gen->add_option("--out", out_path, "output path");

  auto* c_verify = app.add_subcommand("verify", "run the acceptance suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    Config cfg;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      require(in.good(), ErrorCode::BadFile, "cannot open " + config_path);
      json j;
      try {
        in >> j;
      } catch (const json::exception& e) {
        fail(ErrorCode::UnsupportedFormat,
             std::string("bad config file: ") + e.what());
      }
      cfg = config_from_json(j);
    }
    if (budget > 0) cfg.node_budget = budget;
    if (const char* b = std::getenv("FLATSTRATA_BUDGET")) {
      char* end = nullptr;
      long long v = std::strtoll(b, &end, 10);
      if (end && *end == '\0' && v > 0) cfg.node_budget = v;
    }
    cfg.check();

    if (c_validate->parsed()) {
      Surface S(load_surface_file(file), cfg);
      out << "ok " << S.signature().to_string() << "\n";
    } else if (c_info->parsed()) {
      Surface S(load_surface_file(file), cfg);
      out << info_report(S, cfg).dump(2) << "\n";
    } else if (c_periods->parsed()) {
      Surface S(load_surface_file(file), cfg);
      out << periods_report(S, cfg);
    } else if (c_saddles->parsed()) {
      Surface S(load_surface_file(file), cfg);
      detail::write_text(saddles_csv(enumerate_saddles(S, max_length, cfg)),
                         csv_path, out);
    } else if (c_functional->parsed()) {
      Surface S(load_surface_file(file), cfg);
      std::vector<Surjection> sigmas;
      for (const std::string& text : sigma_texts)
        sigmas.push_back(detail::parse_sigma(text, S.signature().n));
      out << functional_report(S, name, sigmas, cfg).dump(2) << "\n";
    } else if (c_hessian->parsed()) {
      Surface S(load_surface_file(file), cfg);
      std::vector<Surjection> sigmas;
      if (!sigma_first.empty())
        sigmas.push_back(detail::parse_sigma(sigma_first, S.signature().n));
      Config hcfg = cfg;
      if (step > 0) hcfg.fd_step_rel = step / systole(S, cfg);
      if (tol > 0) hcfg.tol_eig_rel = tol;
      hcfg.check();
      auto F = detail::named_functional(name, sigmas, hcfg);
      out << hessian_report(name, complex_hessian(S, F, hcfg)).dump(2) << "\n";
    } else if (c_sweep->parsed()) {
      std::string fam;
      std::vector<double> base;
      bool loglog = false;
      if (family == "slit") {
        fam = "slit_tori";
        loglog = true;
      } else if (family == "stretch") {
        fam = "stretched_slit_tori";
        base = {0.1};
      } else if (family == "rect") {
        fam = "rect_torus";
        base = {1.0};
      } else {
        fail(ErrorCode::BadFlag, "sweep families are slit, stretch, rect");
      }
      if (force_loglog) loglog = true;
      if (force_linear) loglog = false;
      detail::write_text(
          sweep_csv(family_sweep(fam, base, name, from, to, steps, loglog,
                                 cfg)),
          csv_path, out);
    } else if (c_bounds->parsed()) {
      out << bounds_report(genus, marked).dump(2) << "\n";
    } else if (c_strata->parsed()) {
      const int eps = marked > 0 ? 1 : 0;
      const int max_depth = depth >= 0 ? depth : 2 * genus - 3 + eps;
      out << strata_csv(genus, marked, max_depth);
    } else if (c_gen->parsed()) {
      Surface S =
          builtins::make(family, detail::parse_params(params_text), cfg);
      if (out_path.empty())
        out << serialize_surface(S.desc());
      else
        save_surface_file(S.desc(), out_path);
    } else if (c_verify->parsed()) {
      int failed = 0;
      for (const auto& res : verify::run_acceptance(cfg, &out))
        if (!res.pass) ++failed;
      return failed == 0 ? 0 : 1;
    }
  } catch (const Error& e) {
    err << e.what() << "\n";
    return is_validation_error(e.code()) ? 2 : 3;
  }
  return 0;
}

}  // namespace flatstrata
