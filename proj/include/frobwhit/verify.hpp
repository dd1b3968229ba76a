#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "frobwhit/hierarchy.hpp"

namespace frobwhit {

struct Report {
  std::string check;
  std::uint64_t point_seed = 0;
  std::string params;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  double wall_ms = 0.0;
};

struct RunConfig {
  int m = 1;
  int n = 1;
  std::uint64_t seed = 1;
  int seeds = 1;
  int i_max = 8;
  int window_k = 16;
  int grid_n = 256;
  double radius = 1.0;
  int fourier_m = 8;
  int nodes = 32;
  std::map<std::string, double> tolerances;  // per-check overrides
  std::string out;

  double tol(const std::string& check, double fallback) const {
    auto it = tolerances.find(check);
    return it == tolerances.end() ? fallback : it->second;
  }
};

// Runs the named suite ("series", "manifold", "frobenius", "hierarchy" or
// "all") across the configured seeds; reports come back sorted by check name.
// Parallelism across seeds is capped by the FROBWHIT_THREADS variable.
std::vector<Report> verify_suite(const std::string& suite, const RunConfig& cfg);

}  // namespace frobwhit
