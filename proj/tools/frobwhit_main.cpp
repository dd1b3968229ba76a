#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>

#include "frobwhit/io_json.hpp"
#include "frobwhit/verify.hpp"

using namespace frobwhit;

namespace {

RunConfig load_config(const std::string& path) {
  RunConfig cfg;
  if (path.empty()) return cfg;
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file " + path);
  Json j = Json::parse(in);
  if (j.contains("m")) cfg.m = j["m"].get<int>();
  if (j.contains("n")) cfg.n = j["n"].get<int>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("seeds")) cfg.seeds = j["seeds"].get<int>();
  if (j.contains("i_max")) cfg.i_max = j["i_max"].get<int>();
  if (j.contains("window_k")) cfg.window_k = j["window_k"].get<int>();
  if (j.contains("grid_n")) cfg.grid_n = j["grid_n"].get<int>();
  if (j.contains("radius")) cfg.radius = j["radius"].get<double>();
  if (j.contains("fourier_m")) cfg.fourier_m = j["fourier_m"].get<int>();
  if (j.contains("nodes")) cfg.nodes = j["nodes"].get<int>();
  if (j.contains("out")) cfg.out = j["out"].get<std::string>();
  if (j.contains("tolerances"))
    for (const auto& [key, val] : j["tolerances"].items())
      cfg.tolerances[key] = val.get<double>();
  return cfg;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot open output file " + path);
  out << text;
}

Json report_to_json(const Report& r) {
  Json j;
  j["check"] = r.check;
  j["point_seed"] = r.point_seed;
  j["params"] = r.params;
  j["residual"] = r.residual;
  j["tolerance"] = r.tolerance;
  j["pass"] = r.pass;
  j["wall_ms"] = r.wall_ms;
  return j;
}

std::string format_complex_csv(const Complex& c) {
  std::ostringstream os;
  os << std::setprecision(17) << c.real() << "," << c.imag();
  return os.str();
}

int cmd_gen(const RunConfig& cfg, bool loop, const std::string& out) {
  Rng rng(cfg.seed);
  Json j;
  if (loop) {
    LoopPoint p = random_loop_point(rng, cfg.m, cfg.n, cfg.fourier_m / 2, cfg.nodes);
    j = to_json(p);
  } else {
    PointMn p = random_point(rng, cfg.m, cfg.n, cfg.radius, cfg.grid_n, cfg.window_k);
    ValidityReport rep = validate(p, point_grid(p, cfg.radius, cfg.grid_n));
    if (!rep.ok()) {
      std::cerr << "generated point failed validation: " << rep.summary() << "\n";
      return 1;
    }
    j = to_json(p);
    j["validity"] = {{"c1", rep.c1}, {"c2", rep.c2},       {"c3", rep.c3},
                     {"winding", rep.winding},             {"min_abs_dzeta", rep.min_abs_dzeta},
                     {"min_abs_dell", rep.min_abs_dell},   {"min_abs_wronskian", rep.min_abs_wronskian}};
  }
  write_text(out, j.dump(2) + "\n");
  return 0;
}

int cmd_validate_point(const RunConfig& cfg, const std::string& point_path,
                       const std::string& out) {
  std::ifstream in(point_path);
  if (!in) throw Error("cannot open point file " + point_path);
  PointMn p = point_from_json(Json::parse(in));
  ValidityReport rep = validate(p, point_grid(p, cfg.radius, cfg.grid_n));
  Json j;
  j["check"] = "manifold.validity";
  j["params"] = rep.summary();
  j["pass"] = rep.ok();
  j["c1"] = rep.c1;
  j["c2"] = rep.c2;
  j["c3"] = rep.c3;
  j["winding"] = rep.winding;
  write_text(out, j.dump(2) + "\n");
  std::cerr << (rep.ok() ? "PASS " : "FAIL ") << rep.summary() << "\n";
  return rep.ok() ? 0 : 1;
}

int cmd_verify(const RunConfig& cfg, const std::string& suite, const std::string& out) {
  std::vector<Report> reports = verify_suite(suite, cfg);
  Json arr = Json::array();
  bool all_pass = true;
  for (const auto& r : reports) {
    arr.push_back(report_to_json(r));
    all_pass = all_pass && r.pass;
    std::cerr << (r.pass ? "PASS " : "FAIL ") << r.check << " seed=" << r.point_seed
              << " residual=" << std::scientific << std::setprecision(3) << r.residual
              << " tol=" << r.tolerance << "\n";
  }
  write_text(out, arr.dump(2) + "\n");
  std::cerr << (all_pass ? "all checks passed" : "some checks FAILED") << " ("
            << reports.size() << " reports)\n";
  return all_pass ? 0 : 1;
}

int cmd_tensor(const RunConfig& cfg, int t_range, const std::string& out) {
  Rng rng(cfg.seed);
  PointMn p = random_point(rng, cfg.m, cfg.n, cfg.radius, cfg.grid_n, cfg.window_k);
  PointData pd = PointData::make(p, cfg.radius, cfg.grid_n);
  std::vector<CoordLabel> labels;
  for (int i = -t_range; i <= t_range; ++i) labels.push_back({CoordLabel::Kind::kT, i});
  for (int j = 1; j <= cfg.m - 1; ++j) labels.push_back({CoordLabel::Kind::kH, j});
  for (int k = 0; k <= cfg.n; ++k) labels.push_back({CoordLabel::Kind::kHhat, k});

  std::ostringstream os;
  os << "kind,label1,label2,label3,re,im\n";
  for (std::size_t x = 0; x < labels.size(); ++x)
    for (std::size_t y = x; y < labels.size(); ++y) {
      Complex g = metric(pd, flat_tangent(pd, labels[x]), flat_tangent(pd, labels[y]));
      os << "gram," << labels[x].str() << "," << labels[y].str() << ",,"
         << format_complex_csv(g) << "\n";
    }
  for (std::size_t x = 0; x < labels.size(); ++x)
    for (std::size_t y = x; y < labels.size(); ++y)
      for (std::size_t z = y; z < labels.size(); ++z) {
        Complex c = c_tensor(pd, labels[x], labels[y], labels[z], CMethod::kPairing);
        os << "c," << labels[x].str() << "," << labels[y].str() << "," << labels[z].str() << ","
           << format_complex_csv(c) << "\n";
      }
  for (int i1 = -t_range; i1 <= t_range; ++i1)
    for (int i2 = i1; i2 <= t_range; ++i2)
      os << "v1_hessian,t:" << i1 << ",t:" << i2 << ",," << format_complex_csv(v1_hessian(pd, i1, i2))
         << "\n";
  for (int j1 = 1; j1 <= cfg.m - 1; ++j1)
    for (int j2 = j1; j2 <= cfg.m - 1; ++j2)
      os << "v2_hessian,h:" << j1 << ",h:" << j2 << ",," << format_complex_csv(v2_hessian(pd, j1, j2))
         << "\n";
  write_text(out, os.str());
  return 0;
}

Flow parse_flow(const std::string& name) {
  if (name.size() < 2) throw DomainError("flow must look like s1 or shat2");
  if (name.rfind("shat", 0) == 0) return Flow{true, std::stoi(name.substr(4))};
  if (name[0] == 's') return Flow{false, std::stoi(name.substr(1))};
  throw DomainError("flow must look like s1 or shat2");
}

int cmd_evolve(const RunConfig& cfg, const std::string& flow_name, double dt, int steps,
               const std::string& out) {
  Rng rng(cfg.seed);
  LoopPoint p = random_loop_point(rng, cfg.m, cfg.n, cfg.fourier_m / 2, cfg.nodes);
  Flow flow = parse_flow(flow_name);
  Trajectory traj = evolve(p, flow, dt, steps, {1, 2});

  std::ostringstream os;
  for (const auto& state : traj.states) os << to_json(state).dump() << "\n";
  write_text(out, os.str());

  std::ostringstream drift;
  drift << "step,time";
  for (int k : traj.tracked) drift << ",H" << k << "_drift";
  drift << "\n";
  for (std::size_t s = 0; s < traj.hamiltonians.size(); ++s) {
    drift << s << "," << std::setprecision(17) << (static_cast<double>(s) * dt);
    for (std::size_t i = 0; i < traj.hamiltonians[s].size(); ++i)
      drift << "," << std::abs(traj.hamiltonians[s][i] - traj.hamiltonians[0][i]);
    drift << "\n";
  }
  std::string drift_path = (out.empty() || out == "-") ? out : out + ".drift.csv";
  write_text(drift_path, drift.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"universal Whitham hierarchy workbench"};
  app.require_subcommand(1);

  std::string config_path, out, suite = "all", flow = "s1";
  std::uint64_t seed_flag = 0;
  bool seed_set = false, loop = false;
  int steps = 10, t_range = 2;
  double dt = 0.01;

  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--seed", seed_flag, "generator seed")->each([&](const std::string&) {
    seed_set = true;
  });
  app.add_option("--out", out, "output path ('-' for stdout)");

  auto* gen = app.add_subcommand("gen", "generate a validated random point");
  gen->fallthrough();
  gen->add_flag("--loop", loop, "generate a loop-space point");

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->fallthrough();
  verify->add_option("--suite", suite, "series|manifold|frobenius|hierarchy|all");
  std::string point_path;
  verify->add_option("--point", point_path, "validate a stored point instead of running a suite");

  auto* tensor = app.add_subcommand("tensor", "dump Gram matrix and 3-tensor values as CSV");
  tensor->fallthrough();
  tensor->add_option("--t-range", t_range, "largest |i| among t labels");

  auto* evolve_cmd = app.add_subcommand("evolve", "integrate a Whitham flow");
  evolve_cmd->fallthrough();
  evolve_cmd->add_option("--flow", flow, "s<k> or shat<k>");
  evolve_cmd->add_option("--dt", dt, "time step");
  evolve_cmd->add_option("--steps", steps, "number of steps");

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg = load_config(config_path);
    if (seed_set) cfg.seed = seed_flag;
    if (out.empty()) out = cfg.out;

    if (gen->parsed()) return cmd_gen(cfg, loop, out);
    if (verify->parsed())
      return point_path.empty() ? cmd_verify(cfg, suite, out)
                                : cmd_validate_point(cfg, point_path, out);
    if (tensor->parsed()) return cmd_tensor(cfg, t_range, out);
    if (evolve_cmd->parsed()) return cmd_evolve(cfg, flow, dt, steps, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
