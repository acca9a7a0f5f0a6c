#pragma once

// Surface file format and deterministic JSON/CSV emission.  A surface file is
// JSON with keys: "polygons" (list of vertex lists [x, y]), "gluings" (list of
// [[poly, edge], [poly, edge]]), "marked" (records with vertex/order/free),
// and "n" (number of free marked points, checked against the records).

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "flatstrata/common.hpp"
#include "flatstrata/surface.hpp"

namespace flatstrata {

using json = nlohmann::json;

// Rounds to 12 significant digits so reports are byte-stable across runs.
inline double round12(double x) {
  if (!std::isfinite(x)) return x;
  if (x == 0.0) return 0.0;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

inline std::string format12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

inline json surface_to_json(const SurfaceDesc& d) {
  json j;
  j["polygons"] = json::array();
  for (const auto& poly : d.polygons) {
    json jp = json::array();
    for (cplx z : poly) jp.push_back({round12(z.real()), round12(z.imag())});
    j["polygons"].push_back(jp);
  }
  j["gluings"] = json::array();
  for (const auto& g : d.gluings)
    j["gluings"].push_back({{g[0][0], g[0][1]}, {g[1][0], g[1][1]}});
  j["marked"] = json::array();
  int n = 0;
  for (const Marking& mk : d.marked) {
    j["marked"].push_back({{"vertex", {mk.poly, mk.vertex}},
                           {"order", mk.order},
                           {"free", mk.free}});
    if (mk.free) ++n;
  }
  j["n"] = n;
  return j;
}

inline std::string serialize_surface(const SurfaceDesc& d) {
  return surface_to_json(d).dump(2) + "\n";
}

inline SurfaceDesc surface_from_json(const json& j) {
  SurfaceDesc d;
  try {
    for (const auto& jp : j.at("polygons")) {
      Polygon poly;
      for (const auto& jv : jp)
        poly.push_back(cplx(jv.at(0).get<double>(), jv.at(1).get<double>()));
      d.polygons.push_back(std::move(poly));
    }
    for (const auto& jg : j.at("gluings"))
      d.gluings.push_back({{{jg.at(0).at(0).get<int>(), jg.at(0).at(1).get<int>()},
                            {jg.at(1).at(0).get<int>(), jg.at(1).at(1).get<int>()}}});
    for (const auto& jm : j.at("marked")) {
      Marking mk;
      mk.poly = jm.at("vertex").at(0).get<int>();
      mk.vertex = jm.at("vertex").at(1).get<int>();
      mk.order = jm.at("order").get<int>();
      mk.free = jm.at("free").get<bool>();
      d.marked.push_back(mk);
    }
    if (j.contains("n")) {
      int n_claimed = j.at("n").get<int>();
      int n = 0;
      for (const Marking& mk : d.marked)
        if (mk.free) ++n;
      require(n == n_claimed, ErrorCode::SignatureMismatch,
              "file claims n=" + std::to_string(n_claimed) + " but has " +
                  std::to_string(n) + " free markings");
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::UnsupportedFormat, std::string("bad surface file: ") + e.what());
  }
  return d;
}

inline SurfaceDesc parse_surface(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::UnsupportedFormat, std::string("not valid JSON: ") + e.what());
  }
  return surface_from_json(j);
}

inline SurfaceDesc load_surface_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::BadFile, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_surface(ss.str());
}

inline void save_surface_file(const SurfaceDesc& d, const std::string& path) {
  std::ofstream out(path);
  require(out.good(), ErrorCode::BadFile, "cannot write " + path);
  out << serialize_surface(d);
}

// Config round-trips through JSON so runs are reproducible from a file.
inline json config_to_json(const Config& c) {
  return json{{"eps_geom", c.eps_geom},       {"eps_angle", c.eps_angle},
              {"eps_rank", c.eps_rank},       {"tol_eig_rel", c.tol_eig_rel},
              {"fd_step_rel", c.fd_step_rel}, {"node_budget", c.node_budget},
              {"seed", c.seed}};
}

inline Config config_from_json(const json& j) {
  Config c;
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("eps_geom", c.eps_geom);
  get("eps_angle", c.eps_angle);
  get("eps_rank", c.eps_rank);
  get("tol_eig_rel", c.tol_eig_rel);
  get("fd_step_rel", c.fd_step_rel);
  get("node_budget", c.node_budget);
  get("seed", c.seed);
  c.check();
  return c;
}

}  // namespace flatstrata
