#include "frobwhit/frobenius.hpp"

#include <algorithm>
#include <cmath>

namespace frobwhit {

PointData PointData::make(const PointMn& p, double radius, int grid_n, int halfwidth) {
  PointData d;
  d.p = p;
  d.grid = CircleGrid{p.phi, radius, grid_n};
  d.halfwidth = halfwidth;
  d.depth = halfwidth + p.m + p.n + 8;
  auto [a, ahat] = to_pair(p);
  d.a = a;
  d.ahat = ahat;
  d.da = derivative(a);
  d.dahat = derivative(ahat);
  d.dell = derivative(p.ell);
  d.dzeta = derivative(p.zeta);
  d.ell_inf = reexpand_infinity(p.ell, d.depth);
  d.dell_inf = derivative(d.ell_inf);
  d.chi = power_rational(d.ell_inf, 1, p.m, d.depth);
  d.chi_hat = power_rational(p.ell, 1, p.n, d.depth);
  d.zeta_s = samples_of(p.zeta, d.grid);
  d.dzeta_s = samples_of(d.dzeta, d.grid);
  d.a_s = samples_of(a, d.grid);
  d.da_s = samples_of(d.da, d.grid);
  d.ahat_s = samples_of(ahat, d.grid);
  d.dahat_s = samples_of(d.dahat, d.grid);
  d.dell_s = samples_of(d.dell, d.grid);
  return d;
}

SampledFunction PointData::sample(const LaurentSeries& f) const { return samples_of(f, grid); }

LaurentSeries PointData::from_samples(const SampledFunction& s) const {
  return series_from_samples(s, -halfwidth, halfwidth);
}

LaurentSeries PointData::z_power(int i) const {
  SampledFunction f = dzeta_s;
  for (std::size_t j = 0; j < f.values.size(); ++j)
    f.values[j] *= std::pow(zeta_s.values[j], static_cast<double>(i));
  return from_samples(f);
}

LaurentSeries PointData::r_series(int j) const {
  return dell_inf * power_rational(ell_inf, -j, p.m, depth);
}

LaurentSeries PointData::s_series(int k) const {
  return dell * power_rational(p.ell, -k, p.n, depth);
}

Complex pair_vectors(const CotangentVec& w, const TangentVec& v) {
  // exponent-(-1) coefficient pairing; a partner outside the other factor's
  // window is tolerated only when the term it multiplies is negligible
  auto one_slot = [](const LaurentSeries& om, const LaurentSeries& xi) {
    const double floor = 1e-12 * std::max(om.sup_abs(), 1.0);
    Complex acc = 0.0;
    for (const auto& [e, c] : om.coeffs()) {
      if (!xi.window().contains(-1 - e)) {
        if (std::abs(c) > floor)
          throw WindowError("pairing: partner exponent " + std::to_string(-1 - e) +
                            " lies outside the trusted window");
        continue;
      }
      acc += c * xi.coeff(-1 - e);
    }
    return acc;
  };
  return one_slot(w.omega, v.xi) + one_slot(w.omega_hat, v.xi_hat);
}

TangentVec eta_apply(const PointData& pd, const CotangentVec& w) {
  LaurentSeries sum = w.omega + w.omega_hat;
  LaurentSeries prod = w.omega * pd.da + w.omega_hat * pd.dahat;
  LaurentSeries xi = pd.da * project(sum, Projection::kMinus) - project(prod, Projection::kMinus);
  LaurentSeries xi_hat =
      -pd.dahat * project(sum, Projection::kPlus) + project(prod, Projection::kPlus);
  return to_tangent_shape(pd.p, xi, xi_hat);
}

CotangentVec eta_inverse(const PointData& pd, const TangentVec& v) {
  LaurentSeries diff = v.xi - v.xi_hat;
  SampledFunction ratio = sampled_div(pd.sample(diff), pd.dzeta_s);
  LaurentSeries r = pd.from_samples(ratio);
  LaurentSeries qa = v.xi.is_zero() ? LaurentSeries::zero(Chart::kPhi, pd.p.phi)
                                    : div_at_infinity(v.xi, pd.da, pd.depth);
  LaurentSeries qh = v.xi_hat.is_zero() ? LaurentSeries::zero(Chart::kPhi, pd.p.phi)
                                        : div_at_phi(v.xi_hat, pd.dahat, pd.depth);
  LaurentSeries omega = project_ge(qa - r, -pd.p.m + 1);
  LaurentSeries omega_hat = project_le(-qh + r, pd.p.n);
  return to_cotangent_shape(pd.p, omega, omega_hat);
}

namespace {

// res_inf + res_phi of numerator/ell', each taken in its own chart by formal
// single-tail division.
Complex residue_pair_over_dell(const PointData& pd, const LaurentSeries& numerator) {
  if (numerator.is_zero()) return 0.0;
  LaurentSeries n_inf = reexpand_infinity(numerator, pd.depth);
  Complex at_inf = -div_at_infinity(n_inf, pd.dell_inf, pd.depth).coeff(-1);
  Complex at_phi = div_at_phi(numerator, pd.dell, pd.depth).coeff(-1);
  return at_inf + at_phi;
}

LaurentSeries d_ell(const TangentVec& v) {
  return project(v.xi, Projection::kPlus) + project(v.xi_hat, Projection::kMinus);
}

}  // namespace

Complex metric(const PointData& pd, const TangentVec& v1, const TangentVec& v2) {
  SampledFunction s1 = pd.sample(v1.xi - v1.xi_hat);
  SampledFunction s2 = pd.sample(v2.xi - v2.xi_hat);
  SampledFunction integrand = sampled_div(sampled_mul(s1, s2), pd.dzeta_s);
  Complex gamma_term = contour_integral(integrand);
  Complex res_term = residue_pair_over_dell(pd, d_ell(v1) * d_ell(v2));
  return -gamma_term - res_term;
}

TangentVec flat_tangent(const PointData& pd, const CoordLabel& label) {
  check_label(label, pd.p.m, pd.p.n, pd.halfwidth);
  switch (label.kind) {
    case CoordLabel::Kind::kT: {
      LaurentSeries z = pd.z_power(label.index);
      return TangentVec{-project(z, Projection::kMinus), project(z, Projection::kPlus)};
    }
    case CoordLabel::Kind::kH: {
      LaurentSeries col = dell_dh(pd.p.ell, pd.p.m, pd.p.n, label.index);
      return TangentVec{col, col};
    }
    default: {
      LaurentSeries col = dell_dhhat(pd.p.ell, pd.p.m, pd.p.n, label.index);
      return TangentVec{col, col};
    }
  }
}

CotangentVec flat_cotangent(const PointData& pd, const CoordLabel& label) {
  check_label(label, pd.p.m, pd.p.n, pd.halfwidth);
  const int m = pd.p.m, n = pd.p.n;
  switch (label.kind) {
    case CoordLabel::Kind::kT: {
      SampledFunction f = pd.zeta_s;
      for (auto& v : f.values) v = std::pow(v, static_cast<double>(label.index));
      LaurentSeries zi = pd.from_samples(f);
      return CotangentVec{project_ge(zi, -m + 1), -project_le(zi, n)};
    }
    case CoordLabel::Kind::kH: {
      LaurentSeries chi_pow = power_rational(pd.ell_inf, -label.index, m, pd.depth);
      LaurentSeries om = project_ge(reexpand_phi(chi_pow, pd.p.phi, -m + 1), -m + 1);
      return CotangentVec{om, LaurentSeries::zero(Chart::kPhi, pd.p.phi)};
    }
    default: {
      LaurentSeries chihat_pow = power_rational(pd.p.ell, -label.index, n, pd.depth);
      return CotangentVec{LaurentSeries::zero(Chart::kPhi, pd.p.phi),
                          project_le(chihat_pow, n)};
    }
  }
}

CotangentVec unity_cotangent(const PointMn& p) {
  return CotangentVec{
      LaurentSeries::monomial(Chart::kPhi, p.phi, -p.m + 1, 1.0 / static_cast<double>(p.m)),
      LaurentSeries::zero(Chart::kPhi, p.phi)};
}

TangentVec unity_field(const PointData& pd) { return eta_apply(pd, unity_cotangent(pd.p)); }

CotangentVec star(const PointData& pd, const CotangentVec& w1, const CotangentVec& w2) {
  auto plus = [](const LaurentSeries& f) { return project(f, Projection::kPlus); };
  auto minus = [](const LaurentSeries& f) { return project(f, Projection::kMinus); };
  LaurentSeries p1a = w1.omega * pd.da;
  LaurentSeries p2a = w2.omega * pd.da;
  LaurentSeries p1h = w1.omega_hat * pd.dahat;
  LaurentSeries p2h = w2.omega_hat * pd.dahat;
  LaurentSeries slot1 = w2.omega * plus(p1a) - w1.omega * minus(p2a) - w2.omega * minus(p1h) -
                        w1.omega * minus(p2h);
  LaurentSeries slot2 = w2.omega_hat * plus(p1h) - w1.omega_hat * minus(p2h) +
                        w1.omega_hat * plus(p2a) + w2.omega_hat * plus(p1a);
  return to_cotangent_shape(pd.p, project_ge(slot1, -pd.p.m + 1), project_le(slot2, pd.p.n));
}

TangentVec circ(const PointData& pd, const TangentVec& v1, const TangentVec& v2) {
  return eta_apply(pd, star(pd, eta_inverse(pd, v1), eta_inverse(pd, v2)));
}

namespace {

SampledFunction sample_pow_zeta(const PointData& pd, int s) {
  SampledFunction f = pd.zeta_s;
  for (auto& v : f.values) v = std::pow(v, static_cast<double>(s));
  return f;
}

// samples of zeta^s * zeta'
SampledFunction sample_z(const PointData& pd, int s) {
  return sampled_mul(sample_pow_zeta(pd, s), pd.dzeta_s);
}

Complex c_direct(const PointData& pd, std::vector<CoordLabel> labels) {
  std::sort(labels.begin(), labels.end());
  const int m = pd.p.m, n = pd.p.n;
  const CoordLabel::Kind kt = CoordLabel::Kind::kT, kh = CoordLabel::Kind::kH,
                         kk = CoordLabel::Kind::kHhat;
  auto kinds = std::array{labels[0].kind, labels[1].kind, labels[2].kind};
  auto idx = [&](int i) { return labels[static_cast<std::size_t>(i)].index; };

  if (kinds == std::array{kt, kt, kt}) {
    const int i1 = idx(0), i2 = idx(1), i3 = idx(2);
    SampledFunction dz_minus = pd.sample(project(pd.dzeta, Projection::kMinus));
    SampledFunction w = sample_z(pd, i1 + i2 + i3);
    for (std::size_t j = 0; j < w.values.size(); ++j)
      w.values[j] *= -(pd.dzeta_s.values[j] + dz_minus.values[j] + pd.dell_s.values[j]);
    auto cp = [&](int a, int b, int c) {
      SampledFunction za = sample_z(pd, idx(a) + idx(b));
      SampledFunction zc = pd.sample(project(pd.z_power(idx(c)), Projection::kMinus));
      return sampled_mul(za, zc);
    };
    for (const auto& term : {cp(0, 1, 2), cp(1, 2, 0), cp(2, 0, 1)})
      for (std::size_t j = 0; j < w.values.size(); ++j) w.values[j] += term.values[j];
    return contour_integral(w);
  }
  if (kinds == std::array{kt, kt, kh}) {
    SampledFunction w = sample_z(pd, idx(0) + idx(1));
    SampledFunction col = pd.sample(dell_dh(pd.p.ell, m, n, idx(2)));
    return -contour_integral(sampled_mul(w, col));
  }
  if (kinds == std::array{kt, kt, kk}) {
    SampledFunction w = sample_z(pd, idx(0) + idx(1));
    // (ell' chihat^{-k})_- = -dell_dhhat
    SampledFunction col = pd.sample(-dell_dhhat(pd.p.ell, m, n, idx(2)));
    return contour_integral(sampled_mul(w, col));
  }
  if (kinds == std::array{kt, kh, kh}) {
    // c(h_{j1}, h_{j2}, t_i) = res_inf chi^{-j1-j2} ell' (zeta^i zeta')_- dz
    LaurentSeries r = pd.r_series(idx(1) + idx(2));
    LaurentSeries zm = project(pd.z_power(idx(0)), Projection::kMinus);
    LaurentSeries prod = r * reexpand_infinity(zm, pd.depth);
    return -prod.coeff(-1);
  }
  if (kinds == std::array{kt, kk, kk}) {
    // c(hhat_{k1}, hhat_{k2}, t_i) = -res_phi chihat^{-k1-k2} ell' (zeta^i zeta')_+ dz
    LaurentSeries s = pd.s_series(idx(1) + idx(2));
    LaurentSeries zp = project(pd.z_power(idx(0)), Projection::kPlus);
    return -(s * zp).coeff(-1);
  }
  if (kinds == std::array{kh, kh, kh}) {
    const int j1 = idx(0), j2 = idx(1), j3 = idx(2);
    LaurentSeries dz_minus_inf =
        reexpand_infinity(project(pd.dzeta, Projection::kMinus), pd.depth);
    LaurentSeries body = -pd.r_series(j1 + j2 + j3) * (2.0 * pd.dell_inf + dz_minus_inf);
    auto cp = [&](int a, int b, int c) {
      LaurentSeries plus_part = reexpand_infinity(dell_dh(pd.p.ell, m, n, idx(c)), pd.depth);
      return pd.r_series(idx(a) + idx(b)) * plus_part;
    };
    body = body + cp(0, 1, 2) + cp(1, 2, 0) + cp(2, 0, 1);
    return body.coeff(-1);  // -res_inf
  }
  if (kinds == std::array{kh, kh, kk}) {
    // res_inf chi^{-j1-j2} ell' (ell' chihat^{-k})_- dz
    LaurentSeries r = pd.r_series(idx(0) + idx(1));
    LaurentSeries col = reexpand_infinity(-dell_dhhat(pd.p.ell, m, n, idx(2)), pd.depth);
    return -(r * col).coeff(-1);
  }
  if (kinds == std::array{kh, kk, kk}) {
    // -res_phi chihat^{-k1-k2} ell' (ell' chi^{-j})_+ dz
    LaurentSeries s = pd.s_series(idx(1) + idx(2));
    return -(s * dell_dh(pd.p.ell, m, n, idx(0))).coeff(-1);
  }
  if (kinds == std::array{kk, kk, kk}) {
    const int k1 = idx(0), k2 = idx(1), k3 = idx(2);
    LaurentSeries dz_plus = project(pd.dzeta, Projection::kPlus);
    LaurentSeries body = -pd.s_series(k1 + k2 + k3) * (2.0 * pd.dell - dz_plus);
    auto cp = [&](int a, int b, int c) {
      return pd.s_series(idx(a) + idx(b)) * (-dell_dhhat(pd.p.ell, m, n, idx(c)));
    };
    body = body + cp(0, 1, 2) + cp(1, 2, 0) + cp(2, 0, 1);
    return body.coeff(-1);  // +res_phi
  }
  // mixed t, h, hhat family vanishes identically
  return 0.0;
}

}  // namespace

Complex c_tensor(const PointData& pd, CoordLabel u, CoordLabel v, CoordLabel w, CMethod method) {
  for (const auto& l : {u, v, w}) check_label(l, pd.p.m, pd.p.n, pd.halfwidth);
  if (method == CMethod::kPairing) {
    CotangentVec cu = flat_cotangent(pd, u);
    CotangentVec cv = flat_cotangent(pd, v);
    return pair_vectors(star(pd, cu, cv), flat_tangent(pd, w));
  }
  return c_direct(pd, {u, v, w});
}

Complex v1_hessian(const PointData& pd, int i1, int i2) {
  SampledFunction f = sample_z(pd, i1 + i2);
  for (int j = 0; j < pd.grid.n; ++j)
    f.values[static_cast<std::size_t>(j)] /= pd.grid.node(j);
  return contour_integral(f);
}

Complex v2_hessian(const PointData& pd, int j1, int j2) {
  // -res_inf ell' chi^{-j1-j2} / z dz = [z^0] of ell' chi^{-j1-j2}
  return pd.r_series(j1 + j2).coeff(0);
}

Complex g_third(const PointData& pd, const CoordLabel& u, const CoordLabel& v,
                const CoordLabel& w) {
  auto column = [&](const CoordLabel& l) {
    if (l.kind == CoordLabel::Kind::kH) return dell_dh(pd.p.ell, pd.p.m, pd.p.n, l.index);
    if (l.kind == CoordLabel::Kind::kHhat) return dell_dhhat(pd.p.ell, pd.p.m, pd.p.n, l.index);
    throw DomainError("g_third: labels must lie in h or hhat");
  };
  return -residue_pair_over_dell(pd, column(u) * column(v) * column(w));
}

Complex kernel_double_integral(const LaurentSeries& zeta, const LaurentSeries& ell,
                               const CircleGrid& inner, double outer_radius) {
  if (outer_radius <= inner.radius)
    throw DomainError("kernel_double_integral: outer radius must exceed the contour radius");
  CircleGrid outer{inner.center, outer_radius, inner.n};
  auto z_in = samples_of(zeta, inner), l_in = samples_of(ell, inner);
  auto z_out = samples_of(zeta, outer), l_out = samples_of(ell, outer);
  auto w_in = samples_of(LaurentSeries::monomial(Chart::kPhi, inner.center, 1, 1.0), inner);
  auto w_out = samples_of(LaurentSeries::monomial(Chart::kPhi, inner.center, 1, 1.0), outer);
  const int n = inner.n;
  Complex acc = 0.0;
  for (int j = 0; j < n; ++j) {
    const auto ju = static_cast<std::size_t>(j);
    const Complex z1 = inner.center + w_out.values[ju];
    Complex inner_acc = 0.0;
    for (int l = 0; l < n; ++l) {
      const auto lu = static_cast<std::size_t>(l);
      const Complex z2 = inner.center + w_in.values[lu];
      Complex v = 0.5 * z_out.values[ju] * z_in.values[lu] + z_out.values[ju] * l_in.values[lu] -
                  l_out.values[ju] * z_in.values[lu];
      inner_acc += v * std::log((z1 - z2) / z1) * w_in.values[lu];
    }
    acc += inner_acc * w_out.values[ju];
  }
  // two factors of (1/2 pi i) oint ... dz = (r/n) sum f w^j
  return acc / static_cast<double>(n) / static_cast<double>(n);
}

Complex potential_kernel(const PointData& pd, double outer_radius) {
  return kernel_double_integral(pd.p.zeta, pd.p.ell, pd.grid, outer_radius);
}

TangentVec g_apply(const PointData& pd, const CotangentVec& w) {
  LaurentSeries s = pd.a * w.omega + pd.ahat * w.omega_hat;
  LaurentSeries t = pd.da * w.omega + pd.dahat * w.omega_hat;
  Complex rho = t.coeff(-1) / static_cast<double>(pd.p.m);
  LaurentSeries sm = project(s, Projection::kMinus), sp = project(s, Projection::kPlus);
  LaurentSeries tm = project(t, Projection::kMinus), tp = project(t, Projection::kPlus);
  LaurentSeries xi = pd.da * sm - pd.a * tm + rho * pd.da;
  LaurentSeries xi_hat = -pd.dahat * sp + pd.ahat * tp + rho * pd.dahat;
  return to_tangent_shape(pd.p, xi, xi_hat);
}

CotangentVec g_inverse(const PointData& pd, const TangentVec& v) {
  // K = (ahat' xi - a' xi_hat) / (ahat' a - a' ahat), recovered from samples
  SampledFunction num = pd.sample(v.xi);
  SampledFunction xih = pd.sample(v.xi_hat);
  SampledFunction wron = pd.a_s;
  for (std::size_t j = 0; j < num.values.size(); ++j) {
    num.values[j] = pd.dahat_s.values[j] * num.values[j] - pd.da_s.values[j] * xih.values[j];
    wron.values[j] = pd.dahat_s.values[j] * pd.a_s.values[j] -
                     pd.da_s.values[j] * pd.ahat_s.values[j];
  }
  // K and both quotients are two-sided objects, so all three divisions are
  // sampled; the single-tail formal route would amplify the window-edge noise
  // through the divergent tails of 1/a' and 1/ahat'.
  SampledFunction k_s = sampled_div(num, wron);
  LaurentSeries omega = project_ge(pd.from_samples(sampled_div(k_s, pd.da_s)), -pd.p.m + 1);
  LaurentSeries omega_hat = -project_le(pd.from_samples(sampled_div(k_s, pd.dahat_s)), pd.p.n);
  return to_cotangent_shape(pd.p, omega, omega_hat);
}

CotangentVec da_covector(const PointMn& p, Complex at, int width) {
  const Complex base = at - p.phi;
  LaurentSeries::CoeffMap m;
  for (int k = 0; k <= width; ++k)
    m[k - p.m + 1] = std::pow(base, static_cast<double>(p.m - 2 - k));
  Window w{kExpInfLo, width - p.m + 1};
  return CotangentVec{LaurentSeries(Chart::kPhi, p.phi, std::move(m), w),
                      LaurentSeries::zero(Chart::kPhi, p.phi)};
}

CotangentVec dahat_covector(const PointMn& p, Complex at, int width) {
  const Complex base = at - p.phi;
  LaurentSeries::CoeffMap m;
  for (int k = 0; k <= width; ++k)
    m[p.n - k] = std::pow(base, static_cast<double>(k - p.n - 1));
  Window w{p.n - width, kExpInfHi};
  return CotangentVec{LaurentSeries::zero(Chart::kPhi, p.phi),
                      LaurentSeries(Chart::kPhi, p.phi, std::move(m), w)};
}

}  // namespace frobwhit
