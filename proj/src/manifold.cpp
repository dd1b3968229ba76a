#include "frobwhit/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace frobwhit {

namespace {

// Formal depth used by the root and division kernels; generous relative to
// the exponent ranges that the coordinate residues read.
int work_depth(int m, int n) { return 2 * (m + n) + 16; }

LaurentSeries z_power_phi(int m, Complex phi) {
  // z^m expanded in the (z-phi) chart
  LaurentSeries z1(Chart::kPhi, phi, {{1, 1.0}, {0, phi}});
  LaurentSeries acc = LaurentSeries::constant(Chart::kPhi, phi, 1.0);
  for (int i = 0; i < m; ++i) acc = acc * z1;
  return acc;
}

}  // namespace

PointMn make_point(int m, int n, Complex phi, const LaurentSeries& ell,
                   const LaurentSeries& zeta) {
  if (m < 1 || n < 1) throw DomainError("make_point: m and n must be positive");
  if (ell.chart() != Chart::kPhi || ell.phi() != phi || zeta.chart() != Chart::kPhi ||
      zeta.phi() != phi)
    throw ChartError("make_point: series must live in the (z-phi) chart of the point");
  if (!ell.is_zero() && (ell.support_min() < -n || ell.support_max() > m))
    throw DomainError("make_point: ell carries exponents outside [-n, m]");
  if (std::abs(ell.coeff(m) - 1.0) > 1e-12)
    throw DomainError("make_point: ell must have unit coefficient at (z-phi)^m");
  if (m >= 1 && std::abs(ell.coeff(m - 1) - static_cast<double>(m) * phi) > 1e-12)
    throw DomainError("make_point: ell coefficient at (z-phi)^{m-1} must equal m*phi");
  PointMn p;
  p.m = m;
  p.n = n;
  p.phi = phi;
  p.ell = ell;
  p.zeta = zeta;
  return p;
}

std::pair<LaurentSeries, LaurentSeries> to_pair(const PointMn& p) {
  LaurentSeries a = project(p.zeta, Projection::kMinus) + p.ell;
  LaurentSeries ahat = -project(p.zeta, Projection::kPlus) + p.ell;
  return {a, ahat};
}

PointMn point_from_pair(int m, int n, Complex phi, const LaurentSeries& a,
                        const LaurentSeries& ahat) {
  if (std::abs(a.coeff(m) - 1.0) > 1e-10)
    throw DomainError("point_from_pair: a is missing its z^m head");
  if (!ahat.is_zero() && ahat.support_min() < -n)
    throw DomainError("point_from_pair: ahat carries exponents below -n");
  LaurentSeries zeta = a - ahat;
  LaurentSeries ell = project(a, Projection::kPlus) + project(ahat, Projection::kMinus);
  return make_point(m, n, phi, ell, zeta);
}

std::string ValidityReport::summary() const {
  std::ostringstream os;
  os << "C1=" << (c1 ? "ok" : "FAIL") << " (|ell_-n|=" << abs_ell_low << ") "
     << "C2=" << (c2 ? "ok" : "FAIL") << " (min|zeta'|=" << min_abs_dzeta
     << ", min|ell'|=" << min_abs_dell << ", min|a'ahat-a ahat'|=" << min_abs_wronskian << ") "
     << "C3=" << (c3 ? "ok" : "FAIL") << " (winding=" << winding << ")";
  return os.str();
}

CircleGrid point_grid(const PointMn& p, double radius, int n) {
  return CircleGrid{p.phi, radius, n};
}

ValidityReport validate(const PointMn& p, const CircleGrid& grid) {
  ValidityReport r;
  r.abs_ell_low = std::abs(p.ell.coeff(-p.n));
  r.c1 = r.abs_ell_low > 1e-10;

  auto [a, ahat] = to_pair(p);
  auto zs = samples_of(p.zeta, grid);
  auto dzs = samples_of(derivative(p.zeta), grid);
  auto dls = samples_of(derivative(p.ell), grid);
  auto as = samples_of(a, grid);
  auto das = samples_of(derivative(a), grid);
  auto ahs = samples_of(ahat, grid);
  auto dahs = samples_of(derivative(ahat), grid);

  double mz = 1e300, ml = 1e300, mw = 1e300;
  for (int j = 0; j < grid.n; ++j) {
    auto u = static_cast<std::size_t>(j);
    mz = std::min(mz, std::abs(dzs.values[u]));
    ml = std::min(ml, std::abs(dls.values[u]));
    mw = std::min(mw, std::abs(das.values[u] * ahs.values[u] - as.values[u] * dahs.values[u]));
  }
  r.min_abs_dzeta = mz;
  r.min_abs_dell = ml;
  r.min_abs_wronskian = mw;
  r.c2 = mz > 1e-10 && ml > 1e-10 && mw > 1e-10;

  bool zero_sample = false;
  for (const auto& v : zs.values)
    if (std::abs(v) == 0.0) zero_sample = true;
  if (zero_sample) {
    r.winding = 0;
    r.c3 = false;
  } else {
    r.winding = winding_number(zs.values);
    r.c3 = (r.winding == 1);
  }
  return r;
}

std::string CoordLabel::str() const {
  switch (kind) {
    case Kind::kT:
      return "t:" + std::to_string(index);
    case Kind::kH:
      return "h:" + std::to_string(index);
    default:
      return "hhat:" + std::to_string(index);
  }
}

void check_label(const CoordLabel& label, int m, int n, int i_max) {
  switch (label.kind) {
    case CoordLabel::Kind::kT:
      if (std::abs(label.index) > i_max)
        throw DomainError("label " + label.str() + " outside |i| <= " + std::to_string(i_max));
      return;
    case CoordLabel::Kind::kH:
      if (label.index < 1 || label.index > m - 1)
        throw DomainError("label " + label.str() + " outside 1..m-1");
      return;
    case CoordLabel::Kind::kHhat:
      if (label.index < 0 || label.index > n)
        throw DomainError("label " + label.str() + " outside 0..n");
      return;
  }
}

double coordinate_degree(const CoordLabel& label, int m, int n) {
  check_label(label, m, n, kExpInfHi);
  switch (label.kind) {
    case CoordLabel::Kind::kT:
      return 1.0 / m - label.index;
    case CoordLabel::Kind::kH:
      return static_cast<double>(label.index + 1) / m;
    default:
      return static_cast<double>(label.index) / n + 1.0 / m;
  }
}

std::pair<std::vector<Complex>, std::vector<Complex>> h_coordinates(const LaurentSeries& ell,
                                                                    int m, int n) {
  const int depth = work_depth(m, n);
  std::vector<Complex> h, hhat;
  if (m > 1) {
    LaurentSeries ell_inf = reexpand_infinity(ell, depth);
    for (int j = 1; j <= m - 1; ++j) {
      // h_j = -(1/j) res_inf ell^{j/m} dz
      LaurentSeries root = power_rational(ell_inf, j, m, depth + j + 2);
      h.push_back(root.coeff(-1) / static_cast<double>(j));
    }
  }
  for (int k = 1; k <= n; ++k) {
    // hhat_k = (1/k) res_phi ell^{k/n} dz
    LaurentSeries root = power_rational(ell, k, n, depth + k + 2);
    hhat.push_back(root.coeff(-1) / static_cast<double>(k));
  }
  return {h, hhat};
}

FlatCoords flat_coordinates(const PointMn& p, const CircleGrid& grid, int i_max) {
  ValidityReport rep = validate(p, grid);
  if (!rep.ok()) throw DomainError("flat_coordinates: invalid point: " + rep.summary());

  FlatCoords fc;
  fc.i_max = i_max;
  auto zs = samples_of(p.zeta, grid);
  for (int i = -i_max; i <= i_max; ++i) {
    if (i == 0) {
      fc.t[0] = log_ratio_integral(zs);
      continue;
    }
    SampledFunction f = zs;
    for (auto& v : f.values) v = std::pow(v, static_cast<double>(-i)) / static_cast<double>(i);
    fc.t[i] = contour_integral(f);
  }
  auto [h, hhat] = h_coordinates(p.ell, p.m, p.n);
  fc.h = std::move(h);
  fc.hhat.push_back(p.phi);
  fc.hhat.insert(fc.hhat.end(), hhat.begin(), hhat.end());
  return fc;
}

LaurentSeries dell_dh(const LaurentSeries& ell, int m, int n, int j) {
  const int depth = work_depth(m, n);
  LaurentSeries ell_inf = reexpand_infinity(ell, depth);
  LaurentSeries chi_pow = power_rational(ell_inf, -j, m, depth);
  LaurentSeries prod = derivative(ell_inf) * chi_pow;
  LaurentSeries poly = truncate_ge(prod, 0);
  return reexpand_phi(poly, ell.phi(), 0);
}

LaurentSeries dell_dhhat(const LaurentSeries& ell, int m, int n, int k) {
  const int depth = work_depth(m, n);
  LaurentSeries chihat_pow = power_rational(ell, -k, n, depth);
  LaurentSeries prod = derivative(ell) * chihat_pow;
  return -truncate_le(prod, -1);
}

namespace {

double target_residual(const LaurentSeries& ell, int m, int n, const std::vector<Complex>& h_t,
                       const std::vector<Complex>& hh_t, std::vector<Complex>* dh,
                       std::vector<Complex>* dhh) {
  auto [h, hh] = h_coordinates(ell, m, n);
  double res = 0.0;
  dh->resize(h.size());
  dhh->resize(hh.size());
  for (std::size_t j = 0; j < h.size(); ++j) {
    (*dh)[j] = h_t[j] - h[j];
    res = std::max(res, std::abs((*dh)[j]));
  }
  for (std::size_t k = 0; k < hh.size(); ++k) {
    (*dhh)[k] = hh_t[k] - hh[k];
    res = std::max(res, std::abs((*dhh)[k]));
  }
  return res;
}

// Newton with the exact Jacobian; damping 1, residual tolerance 1e-12,
// at most 50 steps per run.
bool newton_ell(LaurentSeries& ell, int m, int n, const std::vector<Complex>& h_t,
                const std::vector<Complex>& hh_t, double* residual) {
  std::vector<Complex> dh, dhh;
  for (int it = 0; it < 50; ++it) {
    *residual = target_residual(ell, m, n, h_t, hh_t, &dh, &dhh);
    if (*residual < 1e-12) return true;
    LaurentSeries delta = LaurentSeries::zero(Chart::kPhi, ell.phi());
    for (int j = 1; j <= m - 1; ++j)
      delta = delta + dh[static_cast<std::size_t>(j - 1)] * dell_dh(ell, m, n, j);
    for (int k = 1; k <= n; ++k)
      delta = delta + dhh[static_cast<std::size_t>(k - 1)] * dell_dhhat(ell, m, n, k);
    // the update lives in exponents [-n, m-2]; the forced head is untouched
    delta = truncate_le(truncate_ge(delta, -n), m - 2);
    ell = (ell + delta).with_window(Window::all());
    if (std::abs(ell.coeff(-n)) < 1e-8) return false;  // left the chart of the root
  }
  *residual = target_residual(ell, m, n, h_t, hh_t, &dh, &dhh);
  return *residual < 1e-12;
}

LaurentSeries solve_ell(int m, int n, Complex phi, const std::vector<Complex>& h_t,
                        const std::vector<Complex>& hh_t, const LaurentSeries* seed) {
  LaurentSeries ell = LaurentSeries::zero(Chart::kPhi, phi);
  if (seed && seed->phi() == phi) {
    ell = *seed;
  } else {
    LaurentSeries::CoeffMap init;
    if (n == 1) {
      init[-1] = hh_t[0];
    } else {
      init[-n] = 0.5;
      init[-1] = static_cast<double>(n) * hh_t[static_cast<std::size_t>(n - 1)];
    }
    ell = z_power_phi(m, phi) + LaurentSeries(Chart::kPhi, phi, std::move(init));
  }
  auto check_chart = [&](const LaurentSeries& candidate) {
    if (std::abs(candidate.coeff(-n)) < 1e-8)
      throw DomainError("point_from_flat: hhat coordinates force ell_{-n} to vanish");
  };
  double residual = 0.0;
  if (newton_ell(ell, m, n, h_t, hh_t, &residual)) {
    check_chart(ell);
    return ell;
  }

  // straight-line continuation from the seed's own image, same Newton kernel
  LaurentSeries ell_c = ell;
  auto [h0, hh0] = h_coordinates(ell_c, m, n);
  const int steps = 8;
  for (int s = 1; s <= steps; ++s) {
    double w = static_cast<double>(s) / steps;
    std::vector<Complex> h_s(h_t.size()), hh_s(hh_t.size());
    for (std::size_t j = 0; j < h_t.size(); ++j) h_s[j] = (1.0 - w) * h0[j] + w * h_t[j];
    for (std::size_t k = 0; k < hh_t.size(); ++k) hh_s[k] = (1.0 - w) * hh0[k] + w * hh_t[k];
    if (!newton_ell(ell_c, m, n, h_s, hh_s, &residual))
      throw ConvergenceError("point_from_flat: ell solve stalled", residual);
  }
  check_chart(ell_c);
  return ell_c;
}

}  // namespace

PointMn point_from_flat(const FlatCoords& fc, int m, int n, int zeta_halfwidth,
                        double radius, int grid_n, const PointMn* seed) {
  if (fc.h.size() != static_cast<std::size_t>(m - 1) ||
      fc.hhat.size() != static_cast<std::size_t>(n + 1))
    throw DomainError("point_from_flat: coordinate counts do not match (m, n)");
  const Complex phi = fc.hhat[0];
  const CircleGrid grid{phi, radius, grid_n};

  // zeta: solve sum_i t_i zeta^i = z at every grid node, then transform back
  std::vector<Complex> zeta_nodes(static_cast<std::size_t>(grid.n));
  for (int j = 0; j < grid.n; ++j) {
    const Complex zj = grid.node(j);
    Complex zeta = zj;
    bool done = false;
    for (int it = 0; it < 60; ++it) {
      Complex f = -zj, df = 0.0;
      for (const auto& [i, ti] : fc.t) {
        f += ti * std::pow(zeta, static_cast<double>(i));
        df += static_cast<double>(i) * ti * std::pow(zeta, static_cast<double>(i - 1));
      }
      if (std::abs(f) < 1e-13 * (1.0 + std::abs(zj))) {
        done = true;
        break;
      }
      zeta -= f / df;
    }
    if (!done) throw ConvergenceError("point_from_flat: zeta node solve stalled", 1.0);
    zeta_nodes[static_cast<std::size_t>(j)] = zeta;
  }
  SampledFunction zs{grid, std::move(zeta_nodes)};
  LaurentSeries zeta = series_from_samples(zs, -zeta_halfwidth, zeta_halfwidth);

  std::vector<Complex> h_t(fc.h.begin(), fc.h.end());
  std::vector<Complex> hh_t(fc.hhat.begin() + 1, fc.hhat.end());
  LaurentSeries ell = solve_ell(m, n, phi, h_t, hh_t, seed ? &seed->ell : nullptr);
  return make_point(m, n, phi, ell, zeta);
}

TangentVec to_tangent_shape(const PointMn& p, const LaurentSeries& xi,
                            const LaurentSeries& xi_hat) {
  double norm = std::max({xi.sup_abs(), xi_hat.sup_abs(), 1e-300});
  TangentVec v{truncate_le(xi, p.m - 2), truncate_ge(xi_hat, -p.n - 1)};
  double dropped = std::max((xi - v.xi).sup_abs(), (xi_hat - v.xi_hat).sup_abs());
  if (dropped > 1e-10 * std::max(norm, 1.0))
    throw DomainError("tangent shape violated: truncated mass " + std::to_string(dropped));
  return v;
}

CotangentVec to_cotangent_shape(const PointMn& p, const LaurentSeries& omega,
                                const LaurentSeries& omega_hat) {
  double norm = std::max({omega.sup_abs(), omega_hat.sup_abs(), 1e-300});
  CotangentVec w{truncate_ge(omega, -p.m + 1), truncate_le(omega_hat, p.n)};
  double dropped = std::max((omega - w.omega).sup_abs(), (omega_hat - w.omega_hat).sup_abs());
  if (dropped > 1e-10 * std::max(norm, 1.0))
    throw DomainError("cotangent shape violated: truncated mass " + std::to_string(dropped));
  return w;
}

TangentVec euler_vector(const PointMn& p) {
  auto [a, ahat] = to_pair(p);
  const double m = p.m;
  auto z_times = [&](const LaurentSeries& f) { return shifted(f, 1) + p.phi * f; };
  LaurentSeries xi = a - (1.0 / m) * z_times(derivative(a));
  LaurentSeries xi_hat = ahat - (1.0 / m) * z_times(derivative(ahat));
  return to_tangent_shape(p, xi, xi_hat);
}

PointMn random_point(Rng& rng, int m, int n, double radius, int grid_n, int zeta_halfwidth,
                     int max_retries) {
  (void)zeta_halfwidth;
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    const Complex phi = rng.disc(0.1);
    LaurentSeries::CoeffMap zc{{1, 1.0}, {0, phi}};
    for (int i = -8; i <= 8; ++i) zc[i] += rng.disc(0.05 * std::pow(2.0, -std::abs(i)));
    LaurentSeries zeta(Chart::kPhi, phi, std::move(zc));
    LaurentSeries::CoeffMap lc;
    for (int e = -n; e <= m - 2; ++e) lc[e] = rng.disc(1.0);
    double r_low = std::sqrt(rng.uniform(0.09, 1.0));  // area-uniform modulus in [0.3, 1]
    double th = 2.0 * kPi * rng.uniform();
    lc[-n] = r_low * Complex(std::cos(th), std::sin(th));
    LaurentSeries ell = z_power_phi(m, phi) + LaurentSeries(Chart::kPhi, phi, std::move(lc));
    PointMn p = make_point(m, n, phi, ell, zeta);
    if (validate(p, point_grid(p, radius, grid_n)).ok()) return p;
  }
  throw ConvergenceError("random_point: no valid draw within retry budget", 0.0);
}

PointMn random_flat_point(Rng& rng, int m, int n, int i_max, double radius, int grid_n,
                          int zeta_halfwidth, int max_retries) {
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    PointMn base = random_point(rng, m, n, radius, grid_n, zeta_halfwidth, max_retries);
    FlatCoords fc = flat_coordinates(base, point_grid(base, radius, grid_n), i_max);
    try {
      PointMn p = point_from_flat(fc, m, n, zeta_halfwidth, radius, grid_n, &base);
      if (validate(p, point_grid(p, radius, grid_n)).ok()) return p;
    } catch (const ConvergenceError&) {
      continue;
    }
  }
  throw ConvergenceError("random_flat_point: no representable draw within retry budget", 0.0);
}

PointMn rescale_point(const PointMn& p, double s) {
  const double root = std::pow(s, 1.0 / p.m);
  const Complex phi = root * p.phi;
  auto transform = [&](const LaurentSeries& f) {
    LaurentSeries::CoeffMap out;
    for (const auto& [k, c] : f.coeffs())
      out[k] = c * s * std::pow(root, static_cast<double>(-k));
    return LaurentSeries(Chart::kPhi, phi, std::move(out), f.window());
  };
  PointMn q;
  q.m = p.m;
  q.n = p.n;
  q.phi = phi;
  q.ell = transform(p.ell);
  q.zeta = transform(p.zeta);
  return q;
}

}  // namespace frobwhit
