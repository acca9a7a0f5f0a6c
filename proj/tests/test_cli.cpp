#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "flatstrata/cli.hpp"

namespace fs = flatstrata;

namespace {

struct RunResult {
  int code = 0;
  std::string out;
  std::string err;
};

RunResult run(std::vector<std::string> args) {
  std::vector<const char*> argv = {"flatstrata"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  RunResult res;
  res.code = fs::cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  res.out = out.str();
  res.err = err.str();
  return res;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("gen, validate and info round trip") {
  const std::string path = temp_path("cli_oct.json");
  auto gen = run({"gen", "--family", "regular_octagon", "--params", "1.0",
                  "--out", path});
  REQUIRE(gen.code == 0);

  auto val = run({"validate", path});
  REQUIRE(val.code == 0);
  REQUIRE(val.out == "ok g=2,n=0,m=(2)\n");

  auto info = run({"info", path});
  REQUIRE(info.code == 0);
  auto j = fs::json::parse(info.out);
  REQUIRE(j["genus"] == 2);
  REQUIRE(j["period_rank"] == 4);
  REQUIRE(j["depth"] == 1);
  REQUIRE(j["systole"].get<double>() == Catch::Approx(1.0));
  std::remove(path.c_str());
}

TEST_CASE("gen without --out streams the surface") {
  auto gen = run({"gen", "--family", "square_torus"});
  REQUIRE(gen.code == 0);
  fs::Surface S(fs::parse_surface(gen.out));
  REQUIRE(S.genus() == 1);
}

TEST_CASE("reports are byte identical across runs") {
  const std::string path = temp_path("cli_slit.json");
  REQUIRE(run({"gen", "--family", "slit_tori", "--params", "0.2", "--out",
               path}).code == 0);
  for (const char* sub : {"info", "periods"}) {
    auto a = run({sub, path});
    auto b = run({sub, path});
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
  }
  auto a = run({"saddles", path, "--max-length", "1.5"});
  auto b = run({"saddles", path, "--max-length", "1.5"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  std::remove(path.c_str());
}

TEST_CASE("periods report lists a full basis") {
  const std::string path = temp_path("cli_oct2.json");
  REQUIRE(run({"gen", "--family", "regular_octagon", "--params", "1.0",
               "--out", path}).code == 0);
  auto res = run({"periods", path});
  REQUIRE(res.code == 0);
  REQUIRE(res.out.rfind("# d = 4\n", 0) == 0);
  int cycles = 0;
  std::istringstream in(res.out);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#' && line != "cycle_id,re,im") ++cycles;
  REQUIRE(cycles == 4);
  std::remove(path.c_str());
}

TEST_CASE("saddles can write a csv file") {
  const std::string surf = temp_path("cli_sq.json");
  const std::string csv = temp_path("cli_saddles.csv");
  REQUIRE(run({"gen", "--family", "square_torus", "--out", surf}).code == 0);
  auto res = run({"saddles", surf, "--max-length", "1.2", "--csv", csv});
  REQUIRE(res.code == 0);
  REQUIRE(res.out.empty());
  std::ifstream in(csv);
  std::string header;
  REQUIRE(std::getline(in, header));
  REQUIRE(header == "length,re,im,start,end");
  int rows = 0;
  std::string line;
  while (std::getline(in, line)) ++rows;
  REQUIRE(rows == 4);  // four shortest lattice directions
  std::remove(surf.c_str());
  std::remove(csv.c_str());
}

TEST_CASE("functional subcommand matches the library") {
  const std::string path = temp_path("cli_slit2.json");
  REQUIRE(run({"gen", "--family", "slit_tori", "--params", "0.2", "--out",
               path}).code == 0);
  fs::Surface S(fs::load_surface_file(path));

  auto res = run({"functional", path, "--name", "exhm"});
  REQUIRE(res.code == 0);
  auto j = fs::json::parse(res.out);
  REQUIRE(j["value"].get<double>() == Catch::Approx(fs::exh_m(S)));

  auto zeta = run({"functional", path, "--name", "zeta", "--sigma", "0,0"});
  REQUIRE(zeta.code == 0);
  auto jz = fs::json::parse(zeta.out);
  REQUIRE(jz["components"]["in_V"] == false);
  REQUIRE(jz["components"]["in_U"] == false);

  auto chain = run({"functional", path, "--name", "chain", "--sigma", "0,1",
                    "--sigma", "0,0"});
  REQUIRE(chain.code == 0);
  auto jc = fs::json::parse(chain.out);
  REQUIRE(jc["components"]["links"].size() == 2);
  std::remove(path.c_str());
}

TEST_CASE("hessian subcommand reports the exhaustion signature") {
  const std::string path = temp_path("cli_oct3.json");
  REQUIRE(run({"gen", "--family", "regular_octagon", "--params", "1.0",
               "--out", path}).code == 0);
  auto res = run({"hessian", path, "--functional", "exhm"});
  REQUIRE(res.code == 0);
  auto j = fs::json::parse(res.out);
  REQUIRE(j["signature"] == "(2,0,2)");
  REQUIRE(j["dimension"] == 4);
  REQUIRE(j["zero"].get<int>() >= 1);
  std::remove(path.c_str());
}

TEST_CASE("sweep subcommand fits the decay law") {
  auto res = run({"sweep", "--family", "slit", "--from", "0.02", "--to", "0.1",
                  "--steps", "5", "--functional", "energy"});
  REQUIRE(res.code == 0);
  double slope = 0;
  std::istringstream in(res.out);
  std::string line;
  while (std::getline(in, line))
    if (line.rfind("# slope = ", 0) == 0) slope = std::stod(line.substr(10));
  REQUIRE(slope == Catch::Approx(-2.0).margin(0.1));
}

TEST_CASE("bounds and strata tables") {
  auto b = run({"bounds", "--genus", "2", "--marked", "0"});
  REQUIRE(b.code == 0);
  auto j = fs::json::parse(b.out);
  REQUIRE(j["harer_bound"] == 3);
  REQUIRE(j["moduli_bound"] == 2);

  auto s = run({"strata", "--genus", "2", "--marked", "0"});
  REQUIRE(s.code == 0);
  std::istringstream in(s.out);
  std::string header;
  REQUIRE(std::getline(in, header));
  REQUIRE(header == "depth,signature,aut_order,proj_dimension");
  int rows = 0;
  std::string line;
  while (std::getline(in, line)) ++rows;
  REQUIRE(rows == 2);  // depths 0 and 1 at genus 2
}

TEST_CASE("broken input exits with the validation code") {
  const std::string path = temp_path("cli_broken.json");
  {
    std::ofstream f(path);
    f << "{\"polygons\": []}\n";
  }
  auto res = run({"validate", path});
  REQUIRE(res.code == 2);
  REQUIRE(res.err.find("UnsupportedFormat") != std::string::npos);
  std::remove(path.c_str());

  {
    std::ofstream f(path);
    // quadrilateral with a side glued to a non parallel side
    f << R"({"polygons": [[[0,0],[1,0],[1.5,1],[0,1]]],
            "gluings": [[[0,0],[0,2]],[[0,1],[0,3]]],
            "marked": []})";
  }
  auto res2 = run({"validate", path});
  REQUIRE(res2.code == 2);
  REQUIRE(res2.err.find("opposite") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("flag errors and help") {
  auto bad = run({"functional"});
  REQUIRE(bad.code == 2);

  auto nosuch = run({"gen", "--family", "nosuch"});
  REQUIRE(nosuch.code == 2);
  REQUIRE(nosuch.err.find("UnknownFamily") != std::string::npos);

  auto help = run({"--help"});
  REQUIRE(help.code == 0);
  REQUIRE(help.out.find("Usage") != std::string::npos);
}

TEST_CASE("config file changes the tolerance knobs") {
  const std::string cfgpath = temp_path("cli_cfg.json");
  {
    std::ofstream f(cfgpath);
    f << R"({"node_budget": 20000})";
  }
  const std::string surf = temp_path("cli_oct4.json");
  REQUIRE(run({"gen", "--family", "regular_octagon", "--params", "1.0",
               "--out", surf}).code == 0);
  auto res = run({"--config", cfgpath, "saddles", surf, "--max-length", "40"});
  REQUIRE(res.code == 3);
  REQUIRE(res.err.find("BudgetExceeded") != std::string::npos);
  std::remove(cfgpath.c_str());
  std::remove(surf.c_str());
}
