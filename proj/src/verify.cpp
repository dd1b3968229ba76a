#include "frobwhit/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <thread>

#include "frobwhit/frobenius.hpp"

namespace frobwhit {

namespace {

using Clock = std::chrono::steady_clock;

class Recorder {
 public:
  Recorder(const RunConfig& cfg, std::uint64_t seed, std::vector<Report>* out)
      : cfg_(cfg), seed_(seed), out_(out) {}

  void add(const std::string& check, const std::string& params, double residual,
           double fallback_tol) {
    Report r;
    r.check = check;
    r.params = params;
    r.point_seed = seed_;
    r.residual = residual;
    r.tolerance = cfg_.tol(check, fallback_tol);
    r.pass = residual <= r.tolerance;
    r.wall_ms =
        std::chrono::duration<double, std::milli>(Clock::now() - mark_).count();
    mark_ = Clock::now();
    out_->push_back(std::move(r));
  }

  void mark() { mark_ = Clock::now(); }

 private:
  const RunConfig& cfg_;
  std::uint64_t seed_;
  std::vector<Report>* out_;
  Clock::time_point mark_ = Clock::now();
};

LaurentSeries random_series(Rng& rng, Complex phi, int lo, int hi, double amp = 1.0) {
  LaurentSeries::CoeffMap m;
  for (int e = lo; e <= hi; ++e) m[e] = rng.disc(amp * std::pow(2.0, -std::abs(e)));
  return LaurentSeries(Chart::kPhi, phi, std::move(m));
}

CotangentVec random_covector(Rng& rng, const PointMn& p, int width = 6) {
  LaurentSeries::CoeffMap om, omh;
  for (int e = -p.m + 1; e <= width; ++e) om[e] = rng.disc(0.05 * std::pow(2.0, -std::abs(e)));
  for (int e = -width; e <= p.n; ++e) omh[e] = rng.disc(0.05 * std::pow(2.0, -std::abs(e)));
  return CotangentVec{LaurentSeries(Chart::kPhi, p.phi, std::move(om)),
                      LaurentSeries(Chart::kPhi, p.phi, std::move(omh))};
}

TangentVec random_tangent(Rng& rng, const PointMn& p, int width = 6) {
  LaurentSeries::CoeffMap xi, xih;
  for (int e = -width; e <= p.m - 2; ++e) xi[e] = rng.disc(0.05 * std::pow(2.0, -std::abs(e)));
  for (int e = -p.n - 1; e <= width; ++e) xih[e] = rng.disc(0.05 * std::pow(2.0, -std::abs(e)));
  return TangentVec{LaurentSeries(Chart::kPhi, p.phi, std::move(xi)),
                    LaurentSeries(Chart::kPhi, p.phi, std::move(xih))};
}

double covec_diff(const CotangentVec& a, const CotangentVec& b) {
  return std::max(max_abs_diff(a.omega, b.omega), max_abs_diff(a.omega_hat, b.omega_hat));
}

double vec_diff(const TangentVec& a, const TangentVec& b) {
  return std::max(max_abs_diff(a.xi, b.xi), max_abs_diff(a.xi_hat, b.xi_hat));
}

std::vector<CoordLabel> all_labels(int m, int n, int t_range) {
  std::vector<CoordLabel> out;
  for (int i = -t_range; i <= t_range; ++i) out.push_back({CoordLabel::Kind::kT, i});
  for (int j = 1; j <= m - 1; ++j) out.push_back({CoordLabel::Kind::kH, j});
  for (int k = 0; k <= n; ++k) out.push_back({CoordLabel::Kind::kHhat, k});
  return out;
}

Complex gram_expected(const CoordLabel& a, const CoordLabel& b, int m, int n) {
  if (a.kind != b.kind) return 0.0;
  switch (a.kind) {
    case CoordLabel::Kind::kT:
      return a.index + b.index == -1 ? -1.0 : 0.0;
    case CoordLabel::Kind::kH:
      return a.index + b.index == m ? static_cast<double>(m) : 0.0;
    default:
      return a.index + b.index == n ? static_cast<double>(n) : 0.0;
  }
}

void bump(FlatCoords& fc, const CoordLabel& l, Complex step) {
  switch (l.kind) {
    case CoordLabel::Kind::kT:
      fc.t[l.index] += step;
      break;
    case CoordLabel::Kind::kH:
      fc.h[static_cast<std::size_t>(l.index - 1)] += step;
      break;
    default:
      fc.hhat[static_cast<std::size_t>(l.index)] += step;
      break;
  }
}

// ---- per-seed suites --------------------------------------------------------

void series_checks(const RunConfig& cfg, std::uint64_t seed, std::vector<Report>* out) {
  Recorder rec(cfg, seed, out);
  Rng rng(seed);
  const Complex phi = rng.disc(0.1);
  CircleGrid grid{phi, cfg.radius, cfg.grid_n};

  double worst = 0.0;
  for (int t = 0; t < 10; ++t) {
    auto f = random_series(rng, phi, -8, 8);
    auto parts = project(f, Projection::kPlus) + project(f, Projection::kMinus);
    worst = std::max(worst, max_abs_diff(parts, f));
  }
  rec.add("series.partition", "", worst, 1e-15);

  worst = 0.0;
  for (int q = 2; q <= 4; ++q) {
    LaurentSeries::CoeffMap m{{0, 1.0 + rng.disc(0.2)}};
    for (int e = -5; e < 0; ++e) m[e] = rng.disc(0.3);
    auto base = LaurentSeries(Chart::kInf, 0.0, std::move(m));
    auto root = power_rational(base, 1, q, 16);
    LaurentSeries acc = root;
    for (int k = 1; k < q; ++k) acc = acc * root;
    worst = std::max(worst, max_abs_diff(acc, base, -10, 0) / base.sup_abs());
  }
  rec.add("series.power_consistency", "", worst, 1e-10);

  {
    LaurentSeries::CoeffMap m{{1, 1.0 + rng.disc(0.05)}, {0, rng.disc(0.1)}};
    for (int e = -6; e < 0; ++e) m[e] = rng.disc(0.1 * std::pow(2.0, e));
    auto f = LaurentSeries(Chart::kInf, 0.0, std::move(m));
    auto g = revert(f, 16);
    LaurentSeries comp = LaurentSeries::zero(Chart::kInf, 0.0);
    auto one = LaurentSeries::constant(Chart::kInf, 0.0, 1.0);
    auto ginv = div_at_infinity(one, g, 14);
    for (const auto& [k, c] : f.coeffs()) {
      LaurentSeries p = one;
      for (int i = 0; i < std::abs(k); ++i) p = p * (k >= 0 ? g : ginv);
      comp = comp + c * p;
    }
    double res = std::abs(comp.coeff(1) - 1.0);
    for (int e = -8; e <= 0; ++e) res = std::max(res, std::abs(comp.coeff(e)));
    rec.add("series.revert_composition", "", res, 1e-10);
  }

  worst = 0.0;
  for (int t = 0; t < 10; ++t) {
    auto f = random_series(rng, phi, -5, 4);
    worst = std::max(worst, std::abs(residue_infinity(f) + residue_phi(f)));
  }
  rec.add("series.residue_sum", "", worst, 1e-12);

  worst = 0.0;
  for (int t = 0; t < 5; ++t) {
    auto f = random_series(rng, phi, -8, 8);
    worst = std::max(worst, max_abs_diff(series_from_samples(samples_of(f, grid), -8, 8), f, -8, 8));
  }
  rec.add("series.circle_roundtrip", "", worst, 1e-12);

  worst = 0.0;
  for (int t = 0; t < 10; ++t) {
    auto f = random_series(rng, phi, -6, 6);
    worst = std::max(worst, std::abs(contour_integral(samples_of(f, grid)) - f.coeff(-1)));
  }
  rec.add("series.contour_vs_coeff", "", worst, 1e-12);

  {
    LaurentSeries zeta(Chart::kPhi, Complex(0.0), {{1, 1.0}, {-1, 0.01}});
    CircleGrid g0{Complex(0.0), 1.0, cfg.grid_n};
    CircleGrid g1{Complex(0.0), 1.0, 4 * cfg.grid_n};
    Complex coarse = log_ratio_integral(samples_of(zeta, g0));
    Complex fine = log_ratio_integral(samples_of(zeta, g1));
    rec.add("series.log_ratio_refinement", "", std::abs(coarse - fine), 1e-10);
  }
}

void manifold_checks(const RunConfig& cfg, std::uint64_t seed, std::vector<Report>* out) {
  Recorder rec(cfg, seed, out);
  Rng rng(seed);

  PointMn p = random_point(rng, cfg.m, cfg.n, cfg.radius, cfg.grid_n, cfg.window_k);
  CircleGrid grid = point_grid(p, cfg.radius, cfg.grid_n);
  {
    auto rep = validate(p, grid);
    rec.add("manifold.validity", rep.summary(), rep.ok() ? 0.0 : 1.0, 0.5);
  }
  {
    auto [a, ahat] = to_pair(p);
    PointMn back = point_from_pair(p.m, p.n, p.phi, a, ahat);
    double res = std::max(max_abs_diff(back.ell, p.ell), max_abs_diff(back.zeta, p.zeta));
    rec.add("manifold.convert_involution", "", res, 1e-14);
  }
  {
    rec.mark();
    PointMn q = random_flat_point(rng, cfg.m, cfg.n, cfg.i_max, cfg.radius, cfg.grid_n,
                                  cfg.window_k);
    FlatCoords fc = flat_coordinates(q, point_grid(q, cfg.radius, cfg.grid_n), cfg.i_max);
    PointMn back = point_from_flat(fc, q.m, q.n, cfg.window_k, cfg.radius, cfg.grid_n, &q);
    double res = std::max(max_abs_diff(back.ell, q.ell),
                          max_abs_diff(back.zeta, q.zeta, -cfg.i_max, cfg.i_max));
    rec.add("manifold.flat_roundtrip", "", res, 1e-8);
  }
  {
    const double s = 1.1;
    FlatCoords fc = flat_coordinates(p, grid, 6);
    PointMn q = rescale_point(p, s);
    FlatCoords fq = flat_coordinates(q, point_grid(q, cfg.radius, cfg.grid_n), 6);
    double res = 0.0;
    for (int i = -6; i <= 6; ++i) {
      double deg = coordinate_degree({CoordLabel::Kind::kT, i}, p.m, p.n);
      res = std::max(res, std::abs(fq.t[i] - std::pow(s, deg) * fc.t[i]));
    }
    for (int j = 1; j <= p.m - 1; ++j) {
      double deg = coordinate_degree({CoordLabel::Kind::kH, j}, p.m, p.n);
      res = std::max(res, std::abs(fq.h[static_cast<std::size_t>(j - 1)] -
                                   std::pow(s, deg) * fc.h[static_cast<std::size_t>(j - 1)]));
    }
    for (int k = 0; k <= p.n; ++k) {
      double deg = coordinate_degree({CoordLabel::Kind::kHhat, k}, p.m, p.n);
      res = std::max(res, std::abs(fq.hhat[static_cast<std::size_t>(k)] -
                                   std::pow(s, deg) * fc.hhat[static_cast<std::size_t>(k)]));
    }
    rec.add("manifold.degree_rescale", "s=1.1", res, 1e-8);
  }
  {
    FlatCoords f1 = flat_coordinates(p, point_grid(p, cfg.radius, cfg.grid_n), 6);
    FlatCoords f2 = flat_coordinates(p, point_grid(p, 0.9 * cfg.radius, cfg.grid_n), 6);
    double res = 0.0;
    for (int i = -6; i <= 6; ++i) res = std::max(res, std::abs(f1.t[i] - f2.t[i]));
    rec.add("manifold.radius_independence", "", res, 1e-9);
  }
}

void frobenius_checks(const RunConfig& cfg, std::uint64_t seed, std::vector<Report>* out) {
  Recorder rec(cfg, seed, out);
  Rng rng(seed);
  PointMn p = random_point(rng, cfg.m, cfg.n, cfg.radius, cfg.grid_n, cfg.window_k);
  PointData pd = PointData::make(p, cfg.radius, cfg.grid_n);
  auto labels = all_labels(p.m, p.n, 3);

  {
    double res = 0.0;
    for (const auto& la : labels)
      for (const auto& lb : labels)
        res = std::max(res, std::abs(metric(pd, flat_tangent(pd, la), flat_tangent(pd, lb)) -
                                     gram_expected(la, lb, p.m, p.n)));
    rec.add("frobenius.gram", "", res, 1e-8);
  }
  {
    double res_eta = 0.0, res_g = 0.0;
    for (int t = 0; t < 20; ++t) {
      auto w = random_covector(rng, p);
      res_eta = std::max(res_eta, covec_diff(eta_inverse(pd, eta_apply(pd, w)), w));
      res_g = std::max(res_g, covec_diff(g_inverse(pd, g_apply(pd, w)), w));
    }
    rec.add("frobenius.eta_roundtrip", "covectors=20", res_eta, 1e-9);
    rec.add("frobenius.g_roundtrip", "covectors=20", res_g, 1e-9);
  }
  {
    double comm = 0.0, assoc = 0.0, invar = 0.0, unity = 0.0;
    auto estar = unity_cotangent(p);
    TangentVec e = unity_field(pd);
    for (int t = 0; t < 6; ++t) {
      auto w1 = random_covector(rng, p);
      auto w2 = random_covector(rng, p);
      auto w3 = random_covector(rng, p);
      comm = std::max(comm, covec_diff(star(pd, w1, w2), star(pd, w2, w1)));
      assoc = std::max(assoc,
                       covec_diff(star(pd, star(pd, w1, w2), w3), star(pd, w1, star(pd, w2, w3))));
      unity = std::max(unity, covec_diff(star(pd, estar, w1), w1));
      auto v1 = random_tangent(rng, p);
      auto v2 = random_tangent(rng, p);
      auto v3 = random_tangent(rng, p);
      unity = std::max(unity, vec_diff(circ(pd, e, v1), v1));
      Complex base = metric(pd, circ(pd, v1, v2), v3);
      invar = std::max({invar, std::abs(metric(pd, circ(pd, v2, v3), v1) - base),
                        std::abs(metric(pd, circ(pd, v1, v3), v2) - base)});
    }
    rec.add("frobenius.star_commutative", "", comm, 1e-12);
    rec.add("frobenius.star_associative", "", assoc, 1e-10);
    rec.add("frobenius.invariance", "", invar, 1e-9);
    rec.add("frobenius.unity", "", unity, 1e-10);
  }
  {
    double res = 0.0, zero_res = 0.0;
    auto small = all_labels(p.m, p.n, 2);
    for (std::size_t x = 0; x < small.size(); ++x)
      for (std::size_t y = x; y < small.size(); ++y)
        for (std::size_t z = y; z < small.size(); ++z) {
          Complex direct = c_tensor(pd, small[x], small[y], small[z], CMethod::kDirect);
          Complex paired = c_tensor(pd, small[x], small[y], small[z], CMethod::kPairing);
          res = std::max(res, std::abs(direct - paired));
          bool has_t = false, has_h = false, has_k = false;
          for (const auto& l : {small[x], small[y], small[z]}) {
            has_t |= l.kind == CoordLabel::Kind::kT;
            has_h |= l.kind == CoordLabel::Kind::kH;
            has_k |= l.kind == CoordLabel::Kind::kHhat;
          }
          if (has_t && has_h && has_k) zero_res = std::max(zero_res, std::abs(paired));
        }
    rec.add("frobenius.c_two_route", "t range 2", res, 1e-8);
    rec.add("frobenius.c_zero_family", "", zero_res, 1e-10);
  }
  {
    // potentiality at the level of fourth derivatives, a sampled tuple
    rec.mark();
    PointMn q = random_flat_point(rng, cfg.m, cfg.n, cfg.i_max, cfg.radius, cfg.grid_n,
                                  cfg.window_k);
    FlatCoords fc = flat_coordinates(q, point_grid(q, cfg.radius, cfg.grid_n), cfg.i_max);
    const double eps = 1e-5;
    auto c_at = [&](const CoordLabel& s, double step, const CoordLabel& u, const CoordLabel& v,
                    const CoordLabel& w) {
      FlatCoords f2 = fc;
      bump(f2, s, step);
      PointMn qq = point_from_flat(f2, q.m, q.n, cfg.window_k, cfg.radius, cfg.grid_n, &q);
      auto qd = PointData::make(qq, cfg.radius, cfg.grid_n);
      return c_tensor(qd, u, v, w, CMethod::kPairing);
    };
    CoordLabel u{CoordLabel::Kind::kT, 1}, v{CoordLabel::Kind::kT, -1},
        w{CoordLabel::Kind::kHhat, p.n}, s{CoordLabel::Kind::kT, 0};
    Complex dsduvw = (c_at(s, eps, u, v, w) - c_at(s, -eps, u, v, w)) / (2 * eps);
    Complex dudsvw = (c_at(u, eps, s, v, w) - c_at(u, -eps, s, v, w)) / (2 * eps);
    rec.add("frobenius.potentiality_fd", "t1,t-1,hhat_n|t0", std::abs(dsduvw - dudsvw), 1e-4);
  }
  {
    // Euler: E(c) = (2 + 2/m - sum deg) c along the grading flow
    rec.mark();
    PointMn q = random_flat_point(rng, cfg.m, cfg.n, cfg.i_max, cfg.radius, cfg.grid_n,
                                  cfg.window_k);
    FlatCoords fc = flat_coordinates(q, point_grid(q, cfg.radius, cfg.grid_n), cfg.i_max);
    const double eps = 1e-5;
    CoordLabel u{CoordLabel::Kind::kT, 1}, v{CoordLabel::Kind::kT, 0},
        w{CoordLabel::Kind::kHhat, p.n};
    auto scaled = [&](double step) {
      FlatCoords f2 = fc;
      for (auto& [i, ti] : f2.t)
        ti *= 1.0 + step * coordinate_degree({CoordLabel::Kind::kT, i}, q.m, q.n);
      for (int j = 1; j <= q.m - 1; ++j)
        f2.h[static_cast<std::size_t>(j - 1)] *=
            1.0 + step * coordinate_degree({CoordLabel::Kind::kH, j}, q.m, q.n);
      for (int k = 0; k <= q.n; ++k)
        f2.hhat[static_cast<std::size_t>(k)] *=
            1.0 + step * coordinate_degree({CoordLabel::Kind::kHhat, k}, q.m, q.n);
      PointMn qq = point_from_flat(f2, q.m, q.n, cfg.window_k, cfg.radius, cfg.grid_n, &q);
      auto qd = PointData::make(qq, cfg.radius, cfg.grid_n);
      return c_tensor(qd, u, v, w, CMethod::kPairing);
    };
    Complex euler_c = (scaled(eps) - scaled(-eps)) / (2 * eps);
    auto qd = PointData::make(q, cfg.radius, cfg.grid_n);
    Complex c0 = c_tensor(qd, u, v, w, CMethod::kPairing);
    double total = 2.0 + 2.0 / q.m - coordinate_degree(u, q.m, q.n) -
                   coordinate_degree(v, q.m, q.n) - coordinate_degree(w, q.m, q.n);
    rec.add("frobenius.euler_homogeneity", "t1,t0,hhat_n", std::abs(euler_c - total * c0), 1e-4);

    // Laurent form of E pushes forward to the coordinate form
    TangentVec e_field = euler_vector(p);
    FlatCoords fp = flat_coordinates(p, point_grid(p, cfg.radius, cfg.grid_n), 5);
    double res = 0.0;
    for (int j = -4; j <= 4; ++j) {
      Complex got = metric(pd, flat_tangent(pd, {CoordLabel::Kind::kT, j}), e_field);
      res = std::max(res, std::abs(got + (1.0 / p.m + 1 + j) * fp.t[-1 - j]));
    }
    for (int k = 0; k <= p.n; ++k) {
      Complex got = metric(pd, flat_tangent(pd, {CoordLabel::Kind::kHhat, k}), e_field);
      double factor = p.n * (1.0 / p.m + static_cast<double>(p.n - k) / p.n);
      res = std::max(res, std::abs(got - factor * fp.hhat[static_cast<std::size_t>(p.n - k)]));
    }
    rec.add("frobenius.euler_pushforward", "", res, 1e-8);
  }
  {
    Complex coarse = potential_kernel(pd, 4.0 * cfg.radius);
    auto pd_fine = PointData::make(p, cfg.radius, 2 * cfg.grid_n);
    Complex fine = potential_kernel(pd_fine, 4.0 * cfg.radius);
    rec.add("frobenius.kernel_refinement", "",
            std::abs(coarse - fine) / std::max(1.0, std::abs(coarse)), 1e-7);
  }
}

void hierarchy_checks(const RunConfig& cfg, std::uint64_t seed, std::vector<Report>* out) {
  Recorder rec(cfg, seed, out);
  Rng rng(seed);

  {
    PointMn base = random_point(rng, cfg.m, cfg.n, cfg.radius, cfg.grid_n, cfg.window_k);
    LoopPoint flat = loop_from_point(base, cfg.nodes);
    PointData pd = PointData::make(base, cfg.radius, cfg.grid_n);
    LoopCotangent w = random_loop_cotangent(rng, flat, cfg.fourier_m / 2, 0.05);
    LoopTangent p1 = poisson_apply(flat, w, 1);
    LoopTangent p2 = poisson_apply(flat, w, 2);
    LoopSeries ox = loop_dx(w.omega), ohx = loop_dx(w.omega_hat);
    double r1 = 0.0, r2 = 0.0;
    for (int q = 0; q < cfg.nodes; q += 3) {
      CotangentVec wq{ox.at_node(q), ohx.at_node(q)};
      TangentVec ev = eta_apply(pd, wq);
      TangentVec gv = g_apply(pd, wq);
      r1 = std::max({r1, max_abs_diff(p1.xi.at_node(q), ev.xi),
                     max_abs_diff(p1.xi_hat.at_node(q), ev.xi_hat)});
      r2 = std::max({r2, max_abs_diff(p2.xi.at_node(q), gv.xi),
                     max_abs_diff(p2.xi_hat.at_node(q), gv.xi_hat)});
    }
    rec.add("hierarchy.p1_matches_eta", "x-independent point", r1, 1e-10);
    rec.add("hierarchy.p2_matches_g", "x-independent point", r2, 1e-10);
  }

  LoopPoint lp = random_loop_point(rng, cfg.m, cfg.n, cfg.fourier_m / 2, cfg.nodes);
  {
    double worst = 0.0;
    for (int k = 1; k <= 2; ++k) {
      auto r = recursion_residual(lp, k, false);
      auto rh = recursion_residual(lp, k, true);
      worst = std::max({worst, r.p1_vs_p2, r.p2_vs_rhs, rh.p1_vs_p2, rh.p2_vs_rhs});
    }
    rec.add("hierarchy.recursion", "k=1,2", worst, 1e-6);
  }
  {
    double worst = 0.0;
    for (int k = 1; k <= 2; ++k) {
      worst = std::max(worst, gradient_fd_residual(lp, k, false, rng, 5));
      worst = std::max(worst, gradient_fd_residual(lp, k, true, rng, 5));
    }
    rec.add("hierarchy.gradient_fd", "k=1,2 x 5 dirs", worst, 1e-6);
  }
  {
    auto hk = [&](int k, bool hat) {
      LocalFunctional f;
      f.label = (hat ? "Hhat" : "H") + std::to_string(k);
      f.value = [k, hat](const LoopPoint& q) { return hamiltonian(q, k, hat); };
      f.gradient = [k, hat](const LoopPoint& q) { return var_gradient(q, k, hat); };
      return f;
    };
    double antisym = 0.0, invol = 0.0;
    std::vector<LocalFunctional> fs{hk(1, false), hk(2, false), hk(1, true)};
    for (int nu : {1, 2})
      for (std::size_t i = 0; i < fs.size(); ++i)
        for (std::size_t j = i; j < fs.size(); ++j)
          antisym = std::max(antisym, std::abs(poisson_bracket(fs[i], fs[j], lp, nu) +
                                               poisson_bracket(fs[j], fs[i], lp, nu)));
    for (int k = 1; k <= 2; ++k)
      for (int j = 1; j <= 2; ++j)
        invol = std::max(invol, std::abs(poisson_bracket(hk(k, false), hk(j, false), lp, 1)));
    rec.add("hierarchy.bracket_antisymmetry", "", antisym, 1e-8);
    rec.add("hierarchy.involution", "", invol, 1e-7);
  }
  if (cfg.m == 1) {
    rec.mark();
    const double t_final = 0.1;
    auto translated = [&](const LoopScalar& f) {
      auto md = f.modes();
      const int nn = f.nodes();
      for (int k = 0; k < nn; ++k) {
        int s = k <= nn / 2 ? k : k - nn;
        if (2 * k == nn) s = 0;
        double th = 2.0 * kPi * s * t_final;
        md[static_cast<std::size_t>(k)] *= Complex(std::cos(th), std::sin(th));
      }
      return LoopScalar::from_modes(md, nn);
    };
    auto err_of = [&](int steps) {
      Trajectory traj = evolve(lp, Flow{false, 1}, t_final / steps, steps, {});
      const LoopPoint& q = traj.states.back();
      double err = (q.phi - translated(lp.phi)).sup_abs();
      for (const auto& [e, c] : lp.zeta.coeffs) {
        LoopScalar got = q.zeta.coeffs.count(e) ? q.zeta.coeffs.at(e) : LoopScalar(cfg.nodes);
        err = std::max(err, (got - translated(c)).sup_abs());
      }
      return err;
    };
    rec.add("hierarchy.rk4_translation", "steps=64", err_of(64), 1e-8);
    double ratio = err_of(8) / err_of(16);
    rec.add("hierarchy.rk4_order", "log2(err8/err16)", std::abs(std::log2(ratio) - 4.0), 1.0);
    rec.mark();
    Trajectory traj = evolve(lp, Flow{false, 2}, 0.001, 100, {1, 2});
    double drift = 0.0;
    for (const auto& hs : traj.hamiltonians)
      for (std::size_t i = 0; i < hs.size(); ++i)
        drift = std::max(drift, std::abs(hs[i] - traj.hamiltonians[0][i]));
    rec.add("hierarchy.conservation_drift", "s2 flow, 100 steps", drift, 1e-7);
  }
}

int thread_budget() {
  const char* env = std::getenv("FROBWHIT_THREADS");
  if (!env) return 1;
  int v = std::atoi(env);
  return v < 1 ? 1 : v;
}

}  // namespace

std::vector<Report> verify_suite(const std::string& suite, const RunConfig& cfg) {
  using CheckFn = void (*)(const RunConfig&, std::uint64_t, std::vector<Report>*);
  std::vector<CheckFn> fns;
  if (suite == "series" || suite == "all") fns.push_back(&series_checks);
  if (suite == "manifold" || suite == "all") fns.push_back(&manifold_checks);
  if (suite == "frobenius" || suite == "all") fns.push_back(&frobenius_checks);
  if (suite == "hierarchy" || suite == "all") fns.push_back(&hierarchy_checks);
  if (fns.empty()) throw DomainError("verify_suite: unknown suite '" + suite + "'");

  std::vector<std::vector<Report>> buckets(static_cast<std::size_t>(cfg.seeds));
  const int threads = std::min({thread_budget(), cfg.seeds,
                                static_cast<int>(std::thread::hardware_concurrency() + 1)});
  auto work = [&](int first, int stride) {
    for (int s = first; s < cfg.seeds; s += stride) {
      RunConfig local = cfg;
      std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(s);
      for (auto fn : fns) fn(local, seed, &buckets[static_cast<std::size_t>(s)]);
    }
  };
  if (threads <= 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
    for (auto& th : pool) th.join();
  }

  std::vector<Report> out;
  for (auto& b : buckets) out.insert(out.end(), b.begin(), b.end());
  std::sort(out.begin(), out.end(), [](const Report& a, const Report& b) {
    if (a.check != b.check) return a.check < b.check;
    if (a.point_seed != b.point_seed) return a.point_seed < b.point_seed;
    return a.params < b.params;
  });
  return out;
}

}  // namespace frobwhit
