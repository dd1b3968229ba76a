#include "frobwhit/hierarchy.hpp"

#include <algorithm>
#include <cmath>

namespace frobwhit {

// ---- LoopScalar -------------------------------------------------------------

std::vector<Complex> LoopScalar::modes() const {
  const int n = nodes();
  std::vector<Complex> m(static_cast<std::size_t>(n), Complex(0.0));
  for (int k = 0; k < n; ++k) {
    Complex acc = 0.0;
    for (int q = 0; q < n; ++q) {
      double th = -2.0 * kPi * static_cast<double>(k) * q / n;
      acc += v_[static_cast<std::size_t>(q)] * Complex(std::cos(th), std::sin(th));
    }
    m[static_cast<std::size_t>(k)] = acc / static_cast<double>(n);
  }
  return m;
}

LoopScalar LoopScalar::from_modes(const std::vector<Complex>& m, int nodes) {
  LoopScalar out(nodes);
  const int n = nodes;
  for (int q = 0; q < n; ++q) {
    Complex acc = 0.0;
    for (int k = 0; k < n; ++k) {
      double th = 2.0 * kPi * static_cast<double>(k) * q / n;
      acc += m[static_cast<std::size_t>(k)] * Complex(std::cos(th), std::sin(th));
    }
    out.at(q) = acc;
  }
  return out;
}

namespace {
int signed_mode(int k, int n) { return k <= n / 2 ? k : k - n; }
}  // namespace

LoopScalar LoopScalar::dx() const {
  const int n = nodes();
  auto m = modes();
  for (int k = 0; k < n; ++k) {
    int s = signed_mode(k, n);
    if (2 * k == n) s = 0;  // drop the Nyquist mode
    m[static_cast<std::size_t>(k)] *= Complex(0.0, 2.0 * kPi * s);
  }
  return from_modes(m, n);
}

LoopScalar LoopScalar::antiderivative_x() const {
  const int n = nodes();
  auto m = modes();
  for (int k = 0; k < n; ++k) {
    int s = signed_mode(k, n);
    if (s == 0 || 2 * k == n) {
      m[static_cast<std::size_t>(k)] = 0.0;
      continue;
    }
    m[static_cast<std::size_t>(k)] /= Complex(0.0, 2.0 * kPi * s);
  }
  return from_modes(m, n);
}

LoopScalar LoopScalar::filtered(int max_mode) const {
  const int n = nodes();
  auto m = modes();
  for (int k = 0; k < n; ++k) {
    int sk = signed_mode(k, n);
    if (2 * k == n || std::abs(sk) > max_mode) m[static_cast<std::size_t>(k)] = 0.0;
  }
  return from_modes(m, n);
}

Complex LoopScalar::mean() const {
  Complex acc = 0.0;
  for (const auto& x : v_) acc += x;
  return acc / static_cast<double>(v_.size());
}

double LoopScalar::sup_abs() const {
  double s = 0.0;
  for (const auto& x : v_) s = std::max(s, std::abs(x));
  return s;
}

bool LoopScalar::is_zero() const {
  for (const auto& x : v_)
    if (x != Complex(0.0)) return false;
  return true;
}

LoopScalar operator+(const LoopScalar& a, const LoopScalar& b) {
  LoopScalar out = a;
  for (int q = 0; q < a.nodes(); ++q) out.at(q) += b.at(q);
  return out;
}
LoopScalar operator-(const LoopScalar& a, const LoopScalar& b) {
  LoopScalar out = a;
  for (int q = 0; q < a.nodes(); ++q) out.at(q) -= b.at(q);
  return out;
}
LoopScalar operator*(const LoopScalar& a, const LoopScalar& b) {
  LoopScalar out = a;
  for (int q = 0; q < a.nodes(); ++q) out.at(q) *= b.at(q);
  return out;
}
LoopScalar operator*(Complex s, const LoopScalar& a) {
  LoopScalar out = a;
  for (int q = 0; q < a.nodes(); ++q) out.at(q) *= s;
  return out;
}
LoopScalar operator-(const LoopScalar& a) { return Complex(-1.0) * a; }

// ---- LoopSeries -------------------------------------------------------------

LaurentSeries LoopSeries::at_node(int q) const {
  LaurentSeries::CoeffMap m;
  for (const auto& [e, c] : coeffs) m[e] = c.at(q);
  return LaurentSeries(chart, chart == Chart::kPhi ? phi.at(q) : Complex(0.0), std::move(m),
                       window);
}

LoopSeries LoopSeries::gather(const LoopScalar& phi, const std::vector<LaurentSeries>& per_node) {
  LoopSeries out;
  out.phi = phi;
  out.chart = per_node.empty() ? Chart::kPhi : per_node[0].chart();
  Window w = Window::all();
  const int n = phi.nodes();
  for (int q = 0; q < n; ++q) {
    const auto& f = per_node[static_cast<std::size_t>(q)];
    w.lo = std::max(w.lo, f.window().lo);
    w.hi = std::min(w.hi, f.window().hi);
    for (const auto& [e, c] : f.coeffs()) {
      auto it = out.coeffs.find(e);
      if (it == out.coeffs.end()) it = out.coeffs.emplace(e, LoopScalar(n)).first;
      it->second.at(q) = c;
    }
  }
  out.window = w;
  return out;
}

LoopScalar LoopSeries::coeff(int e) const {
  if (!window.contains(e))
    throw WindowError("loop series coefficient " + std::to_string(e) + " untrusted");
  auto it = coeffs.find(e);
  return it == coeffs.end() ? LoopScalar(nodes()) : it->second;
}

double LoopSeries::sup_abs() const {
  double s = 0.0;
  for (const auto& [e, c] : coeffs) s = std::max(s, c.sup_abs());
  return s;
}

LoopSeries operator+(const LoopSeries& a, const LoopSeries& b) {
  LoopSeries out = a;
  out.window = Window{std::max(a.window.lo, b.window.lo), std::min(a.window.hi, b.window.hi)};
  for (const auto& [e, c] : b.coeffs) {
    auto it = out.coeffs.find(e);
    if (it == out.coeffs.end())
      out.coeffs.emplace(e, c);
    else
      it->second = it->second + c;
  }
  return out;
}

LoopSeries operator-(const LoopSeries& a) {
  LoopSeries out = a;
  for (auto& [e, c] : out.coeffs) c = -c;
  return out;
}

LoopSeries operator-(const LoopSeries& a, const LoopSeries& b) { return a + (-b); }

LoopSeries operator*(Complex s, const LoopSeries& a) {
  LoopSeries out = a;
  for (auto& [e, c] : out.coeffs) c = s * c;
  return out;
}

LoopSeries loop_mul(const LoopSeries& a, const LoopSeries& b) {
  const int n = a.nodes();
  std::vector<LaurentSeries> per(static_cast<std::size_t>(n));
  for (int q = 0; q < n; ++q) per[static_cast<std::size_t>(q)] = a.at_node(q) * b.at_node(q);
  return LoopSeries::gather(a.phi, per);
}

LoopSeries loop_scale(const LoopScalar& s, const LoopSeries& a) {
  LoopSeries out = a;
  for (auto& [e, c] : out.coeffs) c = c * s;
  return out;
}

LoopSeries loop_dz(const LoopSeries& a) {
  LoopSeries out;
  out.chart = a.chart;
  out.phi = a.phi;
  out.window = Window{exp_clamp(static_cast<long long>(a.window.lo) - (a.window.lo > kExpInfLo)),
                      exp_clamp(static_cast<long long>(a.window.hi) - (a.window.hi < kExpInfHi))};
  for (const auto& [e, c] : a.coeffs)
    if (e != 0) out.coeffs[e - 1] = Complex(static_cast<double>(e)) * c;
  return out;
}

LoopSeries loop_dx(const LoopSeries& a) {
  LoopSeries out;
  out.chart = a.chart;
  out.phi = a.phi;
  out.window = a.window;
  for (const auto& [e, c] : a.coeffs) out.coeffs[e] = c.dx();
  if (a.chart == Chart::kPhi && !a.phi.dx().is_zero()) {
    LoopSeries corr = loop_scale(a.phi.dx(), loop_dz(a));
    out = out - corr;
  }
  return out;
}

LoopSeries loop_truncate_ge(const LoopSeries& a, int k) {
  LoopSeries out;
  out.chart = a.chart;
  out.phi = a.phi;
  out.window = (k >= a.window.lo) ? Window{kExpInfLo, a.window.hi} : a.window;
  for (const auto& [e, c] : a.coeffs)
    if (e >= k) out.coeffs[e] = c;
  return out;
}

LoopSeries loop_truncate_le(const LoopSeries& a, int k) {
  LoopSeries out;
  out.chart = a.chart;
  out.phi = a.phi;
  out.window = (k <= a.window.hi) ? Window{a.window.lo, kExpInfHi} : a.window;
  for (const auto& [e, c] : a.coeffs)
    if (e <= k) out.coeffs[e] = c;
  return out;
}

LoopSeries loop_filter_modes(const LoopSeries& a, int max_mode) {
  LoopSeries out = a;
  for (auto& [e, c] : out.coeffs) c = c.filtered(max_mode);
  return out;
}

LoopSeries lie_bracket(const LoopSeries& f, const LoopSeries& g) {
  return loop_mul(loop_dz(f), loop_dx(g)) - loop_mul(loop_dz(g), loop_dx(f));
}

// ---- LoopPoint ---------------------------------------------------------------

PointMn LoopPoint::at_node(int q) const {
  return make_point(m, n, phi.at(q), ell.at_node(q), zeta.at_node(q));
}

double LoopPoint::sup_abs() const {
  return std::max({phi.sup_abs(), ell.sup_abs(), zeta.sup_abs()});
}

LoopPoint loop_from_point(const PointMn& p, int nodes) {
  LoopPoint lp;
  lp.m = p.m;
  lp.n = p.n;
  lp.fourier_modes = nodes / 4;
  lp.phi = LoopScalar(nodes, p.phi);
  std::vector<LaurentSeries> ell_nodes(static_cast<std::size_t>(nodes), p.ell);
  std::vector<LaurentSeries> zeta_nodes(static_cast<std::size_t>(nodes), p.zeta);
  lp.ell = LoopSeries::gather(lp.phi, ell_nodes);
  lp.zeta = LoopSeries::gather(lp.phi, zeta_nodes);
  return lp;
}

bool loop_valid(const LoopPoint& p, double radius, int grid_n) {
  for (int q = 0; q < p.nodes(); ++q) {
    PointMn node = p.at_node(q);
    if (!validate(node, point_grid(node, radius, grid_n)).ok()) return false;
  }
  return true;
}

std::pair<LoopSeries, LoopSeries> loop_pair(const LoopPoint& p) {
  LoopSeries zminus = loop_truncate_le(p.zeta, -1);
  LoopSeries zplus = loop_truncate_ge(p.zeta, 0);
  return {zminus + p.ell, -zplus + p.ell};
}

Complex pair_loop(const LoopCotangent& w, const LoopTangent& v) {
  const int n = w.omega.nodes();
  Complex acc = 0.0;
  for (int q = 0; q < n; ++q) {
    CotangentVec wq{w.omega.at_node(q), w.omega_hat.at_node(q)};
    TangentVec vq{v.xi.at_node(q), v.xi_hat.at_node(q)};
    acc += pair_vectors(wq, vq);
  }
  return acc / static_cast<double>(n);
}

namespace {

LoopTangent loop_tangent_shape(const LoopPoint& p, const LoopSeries& xi,
                               const LoopSeries& xi_hat) {
  // project back onto the retained modes first: brackets of mode-M data carry
  // mode-2M content sitting in the corrupted Nyquist bins of the grid
  LoopSeries xf = loop_filter_modes(xi, p.fourier_modes);
  LoopSeries xhf = loop_filter_modes(xi_hat, p.fourier_modes);
  LoopTangent out{loop_truncate_le(xf, p.m - 2), loop_truncate_ge(xhf, -p.n - 1)};
  double norm = std::max({xf.sup_abs(), xhf.sup_abs(), 1.0});
  double dropped = std::max((xf - out.xi).sup_abs(), (xhf - out.xi_hat).sup_abs());
  if (dropped > 1e-7 * norm)
    throw DomainError("loop tangent shape violated: truncated mass " + std::to_string(dropped));
  return out;
}

}  // namespace

LoopScalar poisson_sigma(const LoopPoint& p, const LoopCotangent& w) {
  auto [a, ahat] = loop_pair(p);
  LoopSeries total = lie_bracket(w.omega, a) + lie_bracket(w.omega_hat, ahat);
  return (1.0 / static_cast<double>(p.m)) * total.coeff(-1);
}

LoopTangent poisson_apply(const LoopPoint& p, const LoopCotangent& w, int nu) {
  if (nu != 1 && nu != 2) throw DomainError("poisson_apply: nu must be 1 or 2");
  auto [a, ahat] = loop_pair(p);
  if (nu == 1) {
    LoopSeries ba = lie_bracket(w.omega, a);
    LoopSeries bh = lie_bracket(w.omega_hat, ahat);
    LoopSeries low = loop_truncate_le(w.omega, -1) + loop_truncate_le(w.omega_hat, -1);
    LoopSeries high = loop_truncate_ge(w.omega, 0) + loop_truncate_ge(w.omega_hat, 0);
    LoopSeries xi = loop_truncate_le(ba, -1) + loop_truncate_le(bh, -1) - lie_bracket(low, a);
    LoopSeries xi_hat =
        -loop_truncate_ge(ba, 0) - loop_truncate_ge(bh, 0) + lie_bracket(high, ahat);
    return loop_tangent_shape(p, xi, xi_hat);
  }
  LoopSeries ba = lie_bracket(w.omega, a);
  LoopSeries bh = lie_bracket(w.omega_hat, ahat);
  LoopScalar sigma = (1.0 / static_cast<double>(p.m)) * (ba + bh).coeff(-1);
  LoopSeries mix = loop_mul(w.omega, a) + loop_mul(w.omega_hat, ahat);
  LoopSeries da = loop_dz(a);
  LoopSeries dahat = loop_dz(ahat);
  LoopSeries xi = loop_mul(loop_truncate_le(ba, -1) + loop_truncate_le(bh, -1), a) -
                  lie_bracket(loop_truncate_le(mix, -1), a) - loop_scale(sigma, da);
  LoopSeries xi_hat = -loop_mul(loop_truncate_ge(ba, 0) + loop_truncate_ge(bh, 0), ahat) +
                      lie_bracket(loop_truncate_ge(mix, 0), ahat) - loop_scale(sigma, dahat);
  return loop_tangent_shape(p, xi, xi_hat);
}

LoopSeries lambda_root(const LoopPoint& p, bool hatted, int depth) {
  const int n = p.nodes();
  std::vector<LaurentSeries> per(static_cast<std::size_t>(n));
  auto [a, ahat] = loop_pair(p);
  for (int q = 0; q < n; ++q) {
    if (hatted) {
      per[static_cast<std::size_t>(q)] = power_rational(ahat.at_node(q), 1, p.n, depth);
    } else {
      LaurentSeries a_inf = reexpand_infinity(a.at_node(q), depth);
      per[static_cast<std::size_t>(q)] = power_rational(a_inf, 1, p.m, depth);
    }
  }
  return LoopSeries::gather(p.phi, per);
}

namespace {

// (lambda^k)_+ as a phi-chart loop polynomial, or -(lambdahat^k)_- for the
// hatted flows
LoopSeries flow_generator(const LoopPoint& p, Flow flow) {
  const int nn = p.nodes();
  const int depth = 24 + p.m + p.n;
  auto [a, ahat] = loop_pair(p);
  std::vector<LaurentSeries> per(static_cast<std::size_t>(nn));
  for (int q = 0; q < nn; ++q) {
    if (!flow.hatted) {
      LaurentSeries a_inf = reexpand_infinity(a.at_node(q), depth);
      LaurentSeries lam_k = power_rational(a_inf, flow.k, p.m, depth);
      LaurentSeries poly = truncate_ge(lam_k, 0);
      per[static_cast<std::size_t>(q)] = reexpand_phi(poly, p.phi.at(q), 0);
    } else {
      LaurentSeries lamhat_k = power_rational(ahat.at_node(q), flow.k, p.n, depth);
      per[static_cast<std::size_t>(q)] = -truncate_le(lamhat_k, -1);
    }
  }
  return LoopSeries::gather(p.phi, per);
}

}  // namespace

LoopTangent whitham_rhs(const LoopPoint& p, Flow flow) {
  if (flow.k < 1) throw DomainError("whitham_rhs: flow index must be positive");
  LoopSeries b = flow_generator(p, flow);
  auto [a, ahat] = loop_pair(p);
  return loop_tangent_shape(p, lie_bracket(b, a), lie_bracket(b, ahat));
}

Complex hamiltonian(const LoopPoint& p, int k, bool hatted) {
  if (k < 1) throw DomainError("hamiltonian: index must be positive");
  const int depth = 24 + p.m + p.n + k;
  auto [a, ahat] = loop_pair(p);
  Complex acc = 0.0;
  for (int q = 0; q < p.nodes(); ++q) {
    if (hatted) {
      LaurentSeries lamhat_k = power_rational(ahat.at_node(q), k, p.n, depth);
      acc += lamhat_k.coeff(-1);  // res_phi
    } else {
      LaurentSeries a_inf = reexpand_infinity(a.at_node(q), depth);
      LaurentSeries lam_k = power_rational(a_inf, k, p.m, depth);
      acc += -lam_k.coeff(-1);  // res_inf
    }
  }
  acc /= static_cast<double>(p.nodes());
  return hatted ? (static_cast<double>(p.n) / k) * acc : -(static_cast<double>(p.m) / k) * acc;
}

LoopCotangent var_gradient(const LoopPoint& p, int k, bool hatted) {
  const int depth = 24 + p.m + p.n + k;
  auto [a, ahat] = loop_pair(p);
  const int nn = p.nodes();
  std::vector<LaurentSeries> om(static_cast<std::size_t>(nn)),
      omh(static_cast<std::size_t>(nn));
  for (int q = 0; q < nn; ++q) {
    if (hatted) {
      LaurentSeries lam = power_rational(ahat.at_node(q), k - p.n, p.n, depth);
      om[static_cast<std::size_t>(q)] = LaurentSeries::zero(Chart::kPhi, p.phi.at(q));
      omh[static_cast<std::size_t>(q)] = truncate_le(lam, p.n);
    } else {
      LaurentSeries a_inf = reexpand_infinity(a.at_node(q), depth);
      LaurentSeries lam = power_rational(a_inf, k - p.m, p.m, depth);
      LaurentSeries in_chart = reexpand_phi(lam, p.phi.at(q), -p.m + 1);
      om[static_cast<std::size_t>(q)] = truncate_ge(in_chart, -p.m + 1);
      omh[static_cast<std::size_t>(q)] = LaurentSeries::zero(Chart::kPhi, p.phi.at(q));
    }
  }
  return LoopCotangent{LoopSeries::gather(p.phi, om), LoopSeries::gather(p.phi, omh)};
}

LoopPoint apply_tangent(const LoopPoint& p, const LoopTangent& v, double eps) {
  const int nn = p.nodes();
  LoopScalar phi_dot(nn);
  LoopScalar ell_low = p.ell.coeff(-p.n);
  LoopScalar hat_low = v.xi_hat.coeff(-p.n - 1);
  for (int q = 0; q < nn; ++q)
    phi_dot.at(q) = hat_low.at(q) / (static_cast<double>(p.n) * ell_low.at(q));

  LoopPoint out = p;
  const int mm = p.fourier_modes;
  out.phi = p.phi + eps * phi_dot.filtered(mm);
  LoopSeries zdot = (v.xi - v.xi_hat) + loop_scale(phi_dot, loop_dz(p.zeta));
  out.zeta = p.zeta + Complex(eps) * loop_filter_modes(zdot, mm);
  LoopSeries ldot = loop_truncate_ge(v.xi, 0) + loop_truncate_le(v.xi_hat, -1) +
                    loop_scale(phi_dot, loop_dz(p.ell));
  ldot = loop_truncate_le(loop_truncate_ge(ldot, -p.n), p.m - 2);
  out.ell = p.ell + Complex(eps) * loop_filter_modes(ldot, mm);
  // the phi-corrected coefficient updates are exactly the coefficients in the
  // moved chart, whose forced head keeps tracking phi
  out.zeta.phi = out.phi;
  out.ell.phi = out.phi;
  out.ell.coeffs[p.m] = LoopScalar(nn, 1.0);
  out.ell.coeffs[p.m - 1] = Complex(static_cast<double>(p.m)) * out.phi;
  return out;
}

double gradient_fd_residual(const LoopPoint& p, int k, bool hatted, Rng& rng, int directions,
                            double eps) {
  LoopCotangent grad = var_gradient(p, k, hatted);
  double worst = 0.0;
  for (int d = 0; d < directions; ++d) {
    LoopTangent v = random_loop_tangent(rng, p, 4, 1.0);
    Complex hp = hamiltonian(apply_tangent(p, v, eps), k, hatted);
    Complex hm = hamiltonian(apply_tangent(p, v, -eps), k, hatted);
    Complex fd = (hp - hm) / (2.0 * eps);
    Complex pairing = pair_loop(grad, v);
    double scale = std::max({std::abs(fd), std::abs(pairing), 1e-6});
    worst = std::max(worst, std::abs(fd - pairing) / scale);
  }
  return worst;
}

LoopTangent random_loop_tangent(Rng& rng, const LoopPoint& p, int modes, double amp) {
  const int nn = p.nodes();
  auto fourier = [&](double a) {
    std::vector<Complex> m(static_cast<std::size_t>(nn), Complex(0.0));
    m[0] = rng.disc(a);
    for (int k = 1; k <= modes; ++k) {
      double decay = a * std::pow(2.0, -k);
      m[static_cast<std::size_t>(k)] = rng.disc(decay);
      m[static_cast<std::size_t>(nn - k)] = rng.disc(decay);
    }
    return LoopScalar::from_modes(m, nn);
  };
  LoopSeries xi = LoopSeries::zero(p.phi), xi_hat = LoopSeries::zero(p.phi);
  for (int e = -4; e <= p.m - 2; ++e)
    xi.coeffs[e] = fourier(amp * std::pow(2.0, -std::abs(e)));
  for (int e = -p.n - 1; e <= 4; ++e)
    xi_hat.coeffs[e] = fourier(amp * std::pow(2.0, -std::abs(e)));
  return LoopTangent{xi, xi_hat};
}

LoopCotangent random_loop_cotangent(Rng& rng, const LoopPoint& p, int modes, double amp) {
  const int nn = p.nodes();
  auto fourier = [&](double a) {
    std::vector<Complex> m(static_cast<std::size_t>(nn), Complex(0.0));
    m[0] = rng.disc(a);
    for (int k = 1; k <= modes; ++k) {
      double decay = a * std::pow(2.0, -k);
      m[static_cast<std::size_t>(k)] = rng.disc(decay);
      m[static_cast<std::size_t>(nn - k)] = rng.disc(decay);
    }
    return LoopScalar::from_modes(m, nn);
  };
  LoopSeries om = LoopSeries::zero(p.phi), omh = LoopSeries::zero(p.phi);
  for (int e = -p.m + 1; e <= 4; ++e) om.coeffs[e] = fourier(amp * std::pow(2.0, -std::abs(e)));
  for (int e = -4; e <= p.n; ++e) omh.coeffs[e] = fourier(amp * std::pow(2.0, -std::abs(e)));
  return LoopCotangent{om, omh};
}

LoopPoint random_loop_point(Rng& rng, int m, int n, int modes, int nodes, double amp,
                            int max_retries) {
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    PointMn base = random_point(rng, m, n);
    auto fourier = [&](Complex center, double a) {
      std::vector<Complex> md(static_cast<std::size_t>(nodes), Complex(0.0));
      md[0] = center + rng.disc(a);
      for (int k = 1; k <= modes; ++k) {
        double decay = a * std::pow(2.0, -k);
        md[static_cast<std::size_t>(k)] = rng.disc(decay);
        md[static_cast<std::size_t>(nodes - k)] = rng.disc(decay);
      }
      return LoopScalar::from_modes(md, nodes);
    };
    LoopPoint lp;
    lp.m = m;
    lp.n = n;
    lp.fourier_modes = std::max(modes, 8);
    lp.phi = fourier(base.phi, amp);
    lp.zeta = LoopSeries::zero(lp.phi);
    for (const auto& [e, c] : base.zeta.coeffs())
      lp.zeta.coeffs[e] = fourier(c, amp * std::pow(2.0, -std::abs(e)));
    lp.ell = LoopSeries::zero(lp.phi);
    for (const auto& [e, c] : base.ell.coeffs()) {
      if (e >= m - 1) continue;  // forced head handled below
      lp.ell.coeffs[e] = fourier(c, amp * std::pow(2.0, -std::abs(e)));
    }
    lp.ell.coeffs[m] = LoopScalar(nodes, 1.0);
    lp.ell.coeffs[m - 1] = Complex(static_cast<double>(m)) * lp.phi;
    if (loop_valid(lp)) return lp;
  }
  throw ConvergenceError("random_loop_point: no valid draw within retry budget", 0.0);
}

double tangent_diff(const LoopTangent& a, const LoopTangent& b) {
  double s = 0.0;
  auto scan = [&](const LoopSeries& x, const LoopSeries& y) {
    for (const auto& [e, c] : x.coeffs) {
      LoopScalar d = c - (y.coeffs.count(e) ? y.coeffs.at(e) : LoopScalar(c.nodes()));
      s = std::max(s, d.sup_abs());
    }
    for (const auto& [e, c] : y.coeffs)
      if (!x.coeffs.count(e)) s = std::max(s, c.sup_abs());
  };
  scan(a.xi, b.xi);
  scan(a.xi_hat, b.xi_hat);
  return s;
}

RecursionResiduals recursion_residual(const LoopPoint& p, int k, bool hatted) {
  if (k < 1) throw DomainError("recursion_residual: k must be positive");
  const int shift = hatted ? p.n : p.m;
  LoopCotangent grad_hi = var_gradient(p, k + shift, hatted);
  LoopCotangent grad_lo = var_gradient(p, k, hatted);
  LoopTangent t1 = poisson_apply(p, grad_hi, 1);
  LoopTangent t2 = poisson_apply(p, grad_lo, 2);
  LoopTangent rhs = whitham_rhs(p, Flow{hatted, k});
  const double scale = std::max(p.sup_abs(), 1.0);
  RecursionResiduals r;
  r.p1_vs_p2 = tangent_diff(t1, t2) / scale;
  r.p2_vs_rhs = tangent_diff(t2, rhs) / scale;
  return r;
}

Complex poisson_bracket(const LocalFunctional& f, const LocalFunctional& h, const LoopPoint& p,
                        int nu) {
  return pair_loop(f.gradient(p), poisson_apply(p, h.gradient(p), nu));
}

LocalFunctional coefficient_functional(const LaurentSeries& g, bool hatted_slot,
                                       const std::string& label) {
  LocalFunctional f;
  f.label = label;
  auto coeffs = g.coeffs();
  f.value = [coeffs, hatted_slot](const LoopPoint& p) {
    auto [a, ahat] = loop_pair(p);
    const LoopSeries& slot = hatted_slot ? ahat : a;
    Complex acc = 0.0;
    for (const auto& [e, ge] : coeffs) {
      if (!slot.coeffs.count(-1 - e)) continue;
      acc += ge * slot.coeffs.at(-1 - e).mean();
    }
    return acc;
  };
  f.gradient = [coeffs, hatted_slot](const LoopPoint& p) {
    auto [a, ahat] = loop_pair(p);
    const LoopSeries& slot = hatted_slot ? ahat : a;
    LoopSeries dslot = loop_dz(slot);
    const int nn = p.nodes();
    // d a_i = [xi + phi_dot a']_i with phi_dot = xi_hat_{-n-1} / (n ell_{-n});
    // the phi-motion piece becomes an (z-phi)^n covector component
    LoopScalar corr(nn);
    for (const auto& [e, ge] : coeffs) {
      if (!dslot.coeffs.count(-1 - e)) continue;
      corr = corr + ge * dslot.coeffs.at(-1 - e);
    }
    LoopScalar ell_low = p.ell.coeff(-p.n);
    for (int q = 0; q < nn; ++q) corr.at(q) /= static_cast<double>(p.n) * ell_low.at(q);

    LoopSeries om = LoopSeries::zero(p.phi), omh = LoopSeries::zero(p.phi);
    for (const auto& [e, ge] : coeffs) {
      if (hatted_slot) {
        if (e <= p.n) omh.coeffs[e] = LoopScalar(nn, ge);
      } else {
        if (e >= -p.m + 1) om.coeffs[e] = LoopScalar(nn, ge);
      }
    }
    auto it = omh.coeffs.find(p.n);
    if (it == omh.coeffs.end())
      omh.coeffs[p.n] = corr;
    else
      it->second = it->second + corr;
    return LoopCotangent{om, omh};
  };
  return f;
}

LocalFunctional product_functional(const LocalFunctional& f, const LocalFunctional& g) {
  LocalFunctional out;
  out.label = f.label + "*" + g.label;
  out.value = [f, g](const LoopPoint& p) { return f.value(p) * g.value(p); };
  out.gradient = [f, g](const LoopPoint& p) {
    const Complex fv = f.value(p), gv = g.value(p);
    LoopCotangent df = f.gradient(p), dg = g.gradient(p);
    return LoopCotangent{gv * df.omega + fv * dg.omega,
                         gv * df.omega_hat + fv * dg.omega_hat};
  };
  return out;
}

// ---- time stepping ------------------------------------------------------------

namespace {

struct StateLayout {
  int m = 1, n = 1, nodes = 32, fourier_modes = 8;
  std::vector<int> zeta_exps, ell_exps;
  std::size_t size() const {
    return static_cast<std::size_t>(nodes) * (1 + zeta_exps.size() + ell_exps.size());
  }
};

StateLayout layout_for(const LoopPoint& p) {
  StateLayout s;
  s.m = p.m;
  s.n = p.n;
  s.nodes = p.nodes();
  s.fourier_modes = p.fourier_modes;
  int zmin = 0, zmax = 1;
  for (const auto& [e, c] : p.zeta.coeffs) {
    zmin = std::min(zmin, e);
    zmax = std::max(zmax, e);
  }
  for (int e = zmin - 8; e <= zmax; ++e) s.zeta_exps.push_back(e);
  for (int e = -p.n; e <= p.m - 2; ++e) s.ell_exps.push_back(e);
  return s;
}

std::vector<Complex> pack_state(const LoopPoint& p, const StateLayout& s) {
  std::vector<Complex> out;
  out.reserve(s.size());
  for (int q = 0; q < s.nodes; ++q) out.push_back(p.phi.at(q));
  for (int e : s.zeta_exps) {
    LoopScalar c = p.zeta.coeffs.count(e) ? p.zeta.coeffs.at(e) : LoopScalar(s.nodes);
    for (int q = 0; q < s.nodes; ++q) out.push_back(c.at(q));
  }
  for (int e : s.ell_exps) {
    LoopScalar c = p.ell.coeffs.count(e) ? p.ell.coeffs.at(e) : LoopScalar(s.nodes);
    for (int q = 0; q < s.nodes; ++q) out.push_back(c.at(q));
  }
  return out;
}

LoopPoint unpack_state(const std::vector<Complex>& v, const StateLayout& s) {
  LoopPoint p;
  p.m = s.m;
  p.n = s.n;
  p.fourier_modes = s.fourier_modes;
  std::size_t at = 0;
  LoopScalar phi(s.nodes);
  for (int q = 0; q < s.nodes; ++q) phi.at(q) = v[at++];
  p.phi = phi;
  p.zeta = LoopSeries::zero(phi);
  for (int e : s.zeta_exps) {
    LoopScalar c(s.nodes);
    for (int q = 0; q < s.nodes; ++q) c.at(q) = v[at++];
    if (!c.is_zero()) p.zeta.coeffs[e] = c;
  }
  p.ell = LoopSeries::zero(phi);
  for (int e : s.ell_exps) {
    LoopScalar c(s.nodes);
    for (int q = 0; q < s.nodes; ++q) c.at(q) = v[at++];
    if (!c.is_zero()) p.ell.coeffs[e] = c;
  }
  p.ell.coeffs[s.m] = LoopScalar(s.nodes, 1.0);
  p.ell.coeffs[s.m - 1] = Complex(static_cast<double>(s.m)) * phi;
  return p;
}

std::vector<Complex> state_velocity(const LoopPoint& p, const LoopTangent& t,
                                    const StateLayout& s) {
  LoopScalar phi_dot(s.nodes);
  LoopScalar ell_low = p.ell.coeff(-p.n);
  LoopScalar hat_low = t.xi_hat.coeff(-p.n - 1);
  for (int q = 0; q < s.nodes; ++q)
    phi_dot.at(q) = hat_low.at(q) / (static_cast<double>(p.n) * ell_low.at(q));
  phi_dot = phi_dot.filtered(p.fourier_modes);
  LoopSeries zdot = loop_filter_modes(
      (t.xi - t.xi_hat) + loop_scale(phi_dot, loop_dz(p.zeta)), p.fourier_modes);
  LoopSeries ldot = loop_filter_modes(
      loop_truncate_ge(t.xi, 0) + loop_truncate_le(t.xi_hat, -1) +
          loop_scale(phi_dot, loop_dz(p.ell)),
      p.fourier_modes);
  std::vector<Complex> out;
  out.reserve(s.size());
  for (int q = 0; q < s.nodes; ++q) out.push_back(phi_dot.at(q));
  for (int e : s.zeta_exps) {
    LoopScalar c = zdot.coeffs.count(e) ? zdot.coeffs.at(e) : LoopScalar(s.nodes);
    for (int q = 0; q < s.nodes; ++q) out.push_back(c.at(q));
  }
  for (int e : s.ell_exps) {
    LoopScalar c = ldot.coeffs.count(e) ? ldot.coeffs.at(e) : LoopScalar(s.nodes);
    for (int q = 0; q < s.nodes; ++q) out.push_back(c.at(q));
  }
  return out;
}

}  // namespace

Trajectory evolve(const LoopPoint& p, Flow flow, double dt, int steps,
                  const std::vector<int>& track) {
  StateLayout layout = layout_for(p);
  auto deriv = [&](const std::vector<Complex>& s) {
    LoopPoint lp = unpack_state(s, layout);
    return state_velocity(lp, whitham_rhs(lp, flow), layout);
  };
  auto axpy = [](const std::vector<Complex>& x, double a, const std::vector<Complex>& y) {
    std::vector<Complex> out = x;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += a * y[i];
    return out;
  };

  Trajectory traj;
  traj.dt = dt;
  traj.tracked = track;
  std::vector<Complex> state = pack_state(p, layout);
  auto record = [&](const std::vector<Complex>& s) {
    LoopPoint lp = unpack_state(s, layout);
    traj.states.push_back(lp);
    std::vector<Complex> hs;
    for (int k : track) hs.push_back(hamiltonian(lp, k, flow.hatted));
    traj.hamiltonians.push_back(std::move(hs));
  };
  record(state);
  for (int step = 0; step < steps; ++step) {
    auto k1 = deriv(state);
    auto k2 = deriv(axpy(state, dt / 2, k1));
    auto k3 = deriv(axpy(state, dt / 2, k2));
    auto k4 = deriv(axpy(state, dt, k3));
    for (std::size_t i = 0; i < state.size(); ++i)
      state[i] += (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    LoopPoint lp = unpack_state(state, layout);
    if (!loop_valid(lp))
      throw ConvergenceError("evolve: validity lost at step " + std::to_string(step + 1),
                             static_cast<double>(step + 1));
    record(state);
  }
  return traj;
}

}  // namespace frobwhit
