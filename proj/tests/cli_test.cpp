#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "frobwhit/io_json.hpp"

using namespace frobwhit;

namespace {

#ifndef FROBWHIT_CLI_PATH
#define FROBWHIT_CLI_PATH "frobwhit"
#endif

int run_cli(const std::string& args) {
  std::string cmd = std::string(FROBWHIT_CLI_PATH) + " " + args + " 2>/dev/null";
  int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("gen is deterministic and validated") {
  REQUIRE(run_cli("gen --seed 1 --out /tmp/frobwhit_cli_a.json") == 0);
  REQUIRE(run_cli("gen --seed 1 --out /tmp/frobwhit_cli_b.json") == 0);
  CHECK(slurp("/tmp/frobwhit_cli_a.json") == slurp("/tmp/frobwhit_cli_b.json"));

  Json j = Json::parse(slurp("/tmp/frobwhit_cli_a.json"));
  CHECK(j["validity"]["winding"].get<int>() == 1);
  CHECK(j["validity"]["c1"].get<bool>());

  // a different seed gives a different point
  REQUIRE(run_cli("gen --seed 2 --out /tmp/frobwhit_cli_c.json") == 0);
  CHECK(slurp("/tmp/frobwhit_cli_a.json") != slurp("/tmp/frobwhit_cli_c.json"));
}

TEST_CASE("gen handles larger m, n and loop points") {
  std::ofstream cfg("/tmp/frobwhit_cli_cfg.json");
  cfg << R"({"m":2,"n":2,"seed":5})";
  cfg.close();
  REQUIRE(run_cli("gen --config /tmp/frobwhit_cli_cfg.json --out /tmp/frobwhit_cli_m22.json") == 0);
  Json j = Json::parse(slurp("/tmp/frobwhit_cli_m22.json"));
  CHECK(j["m"].get<int>() == 2);
  CHECK(j["validity"]["winding"].get<int>() == 1);
  PointMn p = point_from_json(j);
  CHECK(validate(p, point_grid(p)).ok());

  REQUIRE(run_cli("gen --loop --seed 7 --out /tmp/frobwhit_cli_loop.json") == 0);
  LoopPoint lp = loop_point_from_json(Json::parse(slurp("/tmp/frobwhit_cli_loop.json")));
  CHECK(loop_valid(lp));
}

TEST_CASE("verify reports a corrupted point with nonzero exit") {
  // a point with ell_{-n} = 0 violates C1
  Json j = Json::parse(slurp("/tmp/frobwhit_cli_a.json"));
  j["ell"].erase("-1");
  std::ofstream bad("/tmp/frobwhit_cli_bad.json");
  bad << j.dump();
  bad.close();
  CHECK(run_cli("verify --point /tmp/frobwhit_cli_bad.json --out /tmp/frobwhit_cli_badrep.json") !=
        0);
  Json rep = Json::parse(slurp("/tmp/frobwhit_cli_badrep.json"));
  CHECK_FALSE(rep["pass"].get<bool>());
  CHECK_FALSE(rep["c1"].get<bool>());
  CHECK(run_cli("verify --point /tmp/frobwhit_cli_a.json --out -") == 0);
}

TEST_CASE("verify suite runs clean and its report is machine readable") {
  REQUIRE(run_cli("verify --suite series --seed 11 --out /tmp/frobwhit_cli_rep.json") == 0);
  Json rep = Json::parse(slurp("/tmp/frobwhit_cli_rep.json"));
  CHECK(rep.is_array());
  CHECK(rep.size() > 3);
  for (const auto& r : rep) {
    CHECK(r["pass"].get<bool>());
    CHECK(r["residual"].get<double>() <= r["tolerance"].get<double>());
  }
  // deterministic report content for a fixed seed
  REQUIRE(run_cli("verify --suite series --seed 11 --out /tmp/frobwhit_cli_rep2.json") == 0);
  Json rep2 = Json::parse(slurp("/tmp/frobwhit_cli_rep2.json"));
  for (std::size_t i = 0; i < rep.size(); ++i)
    CHECK(rep[i]["residual"].get<double>() == rep2[i]["residual"].get<double>());
}

TEST_CASE("tensor dump carries the Gram constants and zero mixed family") {
  REQUIRE(run_cli("tensor --seed 3 --t-range 1 --out /tmp/frobwhit_cli_tensor.csv") == 0);
  std::istringstream csv(slurp("/tmp/frobwhit_cli_tensor.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "kind,label1,label2,label3,re,im");
  bool saw_diag = false;
  while (std::getline(csv, line)) {
    std::istringstream row(line);
    std::string kind, l1, l2, l3, re_s, im_s;
    std::getline(row, kind, ',');
    std::getline(row, l1, ',');
    std::getline(row, l2, ',');
    std::getline(row, l3, ',');
    std::getline(row, re_s, ',');
    std::getline(row, im_s, ',');
    double re = std::stod(re_s), im = std::stod(im_s);
    if (kind == "gram" && l1 == "t:-1" && l2 == "t:0") {
      CHECK(std::abs(re + 1.0) < 1e-8);
      CHECK(std::abs(im) < 1e-8);
      saw_diag = true;
    }
    if (kind == "c") {
      // mixed t, h, hhat rows vanish
      bool has_t = l1[0] == 't' || l2[0] == 't' || l3[0] == 't';
      bool has_h = l1[0] == 'h' || l2[0] == 'h' || l3[0] == 'h';
      bool has_k = l1.rfind("hhat", 0) == 0 || l2.rfind("hhat", 0) == 0 || l3.rfind("hhat", 0) == 0;
      bool has_plain_h = (l1[0] == 'h' && l1[1] == ':') || (l2[0] == 'h' && l2[1] == ':') ||
                         (l3[0] == 'h' && l3[1] == ':');
      if (has_t && has_plain_h && has_k) CHECK(std::abs(Complex(re, im)) < 1e-10);
      (void)has_h;
    }
  }
  CHECK(saw_diag);
}

TEST_CASE("evolve writes a trajectory and drift diagnostics") {
  REQUIRE(run_cli("evolve --seed 9 --flow s1 --dt 0.002 --steps 5 --out /tmp/frobwhit_cli_traj.jsonl") == 0);
  std::istringstream lines(slurp("/tmp/frobwhit_cli_traj.jsonl"));
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    LoopPoint p = loop_point_from_json(Json::parse(line));
    CHECK(p.nodes() == 32);
    ++count;
  }
  CHECK(count == 6);

  std::string drift = slurp("/tmp/frobwhit_cli_traj.jsonl.drift.csv");
  CHECK(drift.rfind("step,time,H1_drift,H2_drift", 0) == 0);

  // steps = 0 reproduces the generated loop point exactly
  REQUIRE(run_cli("evolve --seed 9 --flow s1 --dt 0.002 --steps 0 --out /tmp/frobwhit_cli_t0.jsonl") == 0);
  REQUIRE(run_cli("gen --loop --seed 9 --out /tmp/frobwhit_cli_loop9.json") == 0);
  Json from_evolve = Json::parse(slurp("/tmp/frobwhit_cli_t0.jsonl"));
  Json from_gen = Json::parse(slurp("/tmp/frobwhit_cli_loop9.json"));
  CHECK(from_evolve == from_gen);
}
