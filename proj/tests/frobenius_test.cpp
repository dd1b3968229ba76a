#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "frobwhit/frobenius.hpp"

using namespace frobwhit;

namespace {

CotangentVec random_covector(Rng& rng, const PointMn& p, int width = 6) {
  // amplitudes follow the 0.05 regime the tolerances are calibrated against
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

double vec_diff(const TangentVec& a, const TangentVec& b) {
  return std::max(max_abs_diff(a.xi, b.xi), max_abs_diff(a.xi_hat, b.xi_hat));
}

double covec_diff(const CotangentVec& a, const CotangentVec& b) {
  return std::max(max_abs_diff(a.omega, b.omega), max_abs_diff(a.omega_hat, b.omega_hat));
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

}  // namespace

TEST_CASE("pairing against generating covectors") {
  Rng rng(201);
  auto p = random_point(rng, 2, 1);
  auto pd = PointData::make(p);

  // w = ((z-phi)^{-1}, 0) against v = (1, 0) pairs to 1
  CotangentVec w{LaurentSeries::monomial(Chart::kPhi, p.phi, -1, 1.0),
                 LaurentSeries::zero(Chart::kPhi, p.phi)};
  TangentVec v{LaurentSeries::constant(Chart::kPhi, p.phi, 1.0),
               LaurentSeries::zero(Chart::kPhi, p.phi)};
  CHECK(std::abs(pair_vectors(w, v) - 1.0) == 0.0);

  // purely positive against purely nonnegative exponents gives zero
  CotangentVec wp{LaurentSeries::monomial(Chart::kPhi, p.phi, 2, 1.0),
                  LaurentSeries::zero(Chart::kPhi, p.phi)};
  CHECK(pair_vectors(wp, v) == Complex(0.0));

  // <da(pt), v> = xi(pt)
  const Complex pt = p.phi + Complex(2.5, 0.4);
  auto dap = da_covector(p, pt, 48);
  for (int trial = 0; trial < 5; ++trial) {
    TangentVec tv = random_tangent(rng, p);
    CHECK(std::abs(pair_vectors(dap, tv) - evaluate(tv.xi, pt)) < 1e-11);
  }
  const Complex qt = p.phi + Complex(0.35, -0.1);
  auto dahq = dahat_covector(p, qt, 48);
  for (int trial = 0; trial < 5; ++trial) {
    TangentVec tv = random_tangent(rng, p);
    CHECK(std::abs(pair_vectors(dahq, tv) - evaluate(tv.xi_hat, qt)) < 1e-11);
  }
}

TEST_CASE("eta on the unity covector gives the unity field") {
  Rng rng(202);
  for (auto [m, n] : {std::pair{1, 1}, {2, 1}, {3, 2}}) {
    auto p = random_point(rng, m, n);
    auto pd = PointData::make(p);
    TangentVec e = unity_field(pd);
    TangentVec expected = [&] {
      if (m == 1) {
        TangentVec t0 = flat_tangent(pd, {CoordLabel::Kind::kT, 0});
        TangentVec hh0 = flat_tangent(pd, {CoordLabel::Kind::kHhat, 0});
        return TangentVec{t0.xi + hh0.xi, t0.xi_hat + hh0.xi_hat};
      }
      TangentVec hm = flat_tangent(pd, {CoordLabel::Kind::kH, m - 1});
      return TangentVec{(1.0 / m) * hm.xi, (1.0 / m) * hm.xi_hat};
    }();
    CHECK(vec_diff(e, expected) < 1e-11);
  }
}

TEST_CASE("eta is linear and inverts") {
  Rng rng(203);
  for (auto [m, n] : {std::pair{1, 1}, {2, 2}}) {
    auto p = random_point(rng, m, n);
    auto pd = PointData::make(p);
    auto w1 = random_covector(rng, p);
    auto w2 = random_covector(rng, p);
    const Complex alpha{0.7, -0.3};
    CotangentVec comb{alpha * w1.omega + w2.omega, alpha * w1.omega_hat + w2.omega_hat};
    TangentVec lhs = eta_apply(pd, comb);
    TangentVec t1 = eta_apply(pd, w1);
    TangentVec t2 = eta_apply(pd, w2);
    TangentVec rhs{alpha * t1.xi + t2.xi, alpha * t1.xi_hat + t2.xi_hat};
    CHECK(vec_diff(lhs, rhs) < 1e-14);

    for (int trial = 0; trial < 10; ++trial) {
      auto w = random_covector(rng, p);
      auto back = eta_inverse(pd, eta_apply(pd, w));
      CHECK(covec_diff(back, w) < 1e-10);
    }
  }
}

TEST_CASE("eta inverse of the flat tangent basis has the closed form") {
  Rng rng(204);
  auto p = random_point(rng, 2, 2);
  auto pd = PointData::make(p);
  for (const auto& label : all_labels(2, 2, 4)) {
    CotangentVec numeric = eta_inverse(pd, flat_tangent(pd, label));
    CotangentVec closed = flat_cotangent(pd, label);
    CHECK(covec_diff(numeric, closed) < 1e-10);
  }
}

TEST_CASE("eta matches the cotangent bilinear form on generating covectors") {
  Rng rng(205);
  auto p = random_point(rng, 2, 1);
  auto pd = PointData::make(p);
  const Complex pp = p.phi + Complex(2.6, 0.3), qq = p.phi + Complex(2.2, -1.5);
  auto w1 = da_covector(p, pp, 60);
  auto w2 = da_covector(p, qq, 60);
  Complex lhs = pair_vectors(w1, eta_apply(pd, w2));
  Complex expected =
      evaluate(pd.da, pp) / (pp - qq) + evaluate(pd.da, qq) / (qq - pp);
  CHECK(std::abs(lhs - expected) < 1e-9);
}

TEST_CASE("flat metric Gram matrix") {
  Rng rng(206);
  for (auto [m, n] : {std::pair{1, 1}, {2, 1}, {3, 2}}) {
    auto p = random_point(rng, m, n);
    auto pd = PointData::make(p);
    auto labels = all_labels(m, n, 3);
    for (const auto& la : labels)
      for (const auto& lb : labels) {
        Complex got = metric(pd, flat_tangent(pd, la), flat_tangent(pd, lb));
        CHECK(std::abs(got - gram_expected(la, lb, m, n)) < 1e-8);
      }
  }
}

TEST_CASE("metric agrees with the eta pairing route") {
  Rng rng(207);
  auto p = random_point(rng, 2, 2);
  auto pd = PointData::make(p);
  for (int trial = 0; trial < 10; ++trial) {
    auto v1 = random_tangent(rng, p);
    auto v2 = random_tangent(rng, p);
    Complex direct = metric(pd, v1, v2);
    Complex via_eta = pair_vectors(eta_inverse(pd, v1), v2);
    CHECK(std::abs(direct - via_eta) < 1e-10);
  }
}

TEST_CASE("flat tangent basis matches finite differences of the point") {
  Rng rng(208);
  auto p = random_flat_point(rng, 2, 1, 6);
  auto pd = PointData::make(p);
  auto grid = point_grid(p);
  FlatCoords fc = flat_coordinates(p, grid, 6);
  const double eps = 1e-6;

  auto perturbed_pair = [&](const CoordLabel& label, double step) {
    FlatCoords f2 = fc;
    switch (label.kind) {
      case CoordLabel::Kind::kT:
        f2.t[label.index] += step;
        break;
      case CoordLabel::Kind::kH:
        f2.h[static_cast<std::size_t>(label.index - 1)] += step;
        break;
      default:
        f2.hhat[static_cast<std::size_t>(label.index)] += step;
        break;
    }
    PointMn q = point_from_flat(f2, p.m, p.n, 16, 1.0, 256, &p);
    return to_pair(q);
  };

  for (const auto& label : all_labels(p.m, p.n, 2)) {
    if (label.kind == CoordLabel::Kind::kHhat && label.index == 0) continue;  // moves the chart
    auto [ap, ahp] = perturbed_pair(label, eps);
    auto [am, ahm] = perturbed_pair(label, -eps);
    TangentVec fd{(0.5 / eps) * (ap - am), (0.5 / eps) * (ahp - ahm)};
    TangentVec basis = flat_tangent(pd, label);
    CHECK(max_abs_diff(fd.xi, basis.xi, -6, p.m - 2) < 1e-5);
    CHECK(max_abs_diff(fd.xi_hat, basis.xi_hat, -p.n - 1, 6) < 1e-5);
  }

  // eta applied to the flat cotangent basis returns the tangent basis;
  // checked on a generator point, whose zeta powers stay inside the
  // recovery window for |i| <= 4
  auto pg = random_point(rng, 2, 1);
  auto pgd = PointData::make(pg);
  for (const auto& label : all_labels(pg.m, pg.n, 4)) {
    TangentVec lhs = eta_apply(pgd, flat_cotangent(pgd, label));
    TangentVec rhs = flat_tangent(pgd, label);
    CHECK(max_abs_diff(lhs.xi, rhs.xi, -pgd.halfwidth, pg.m - 2) < 1e-10);
    CHECK(max_abs_diff(lhs.xi_hat, rhs.xi_hat, -pg.n - 1, pgd.halfwidth) < 1e-10);
  }
}

TEST_CASE("star product axioms") {
  Rng rng(209);
  for (auto [m, n] : {std::pair{1, 1}, {2, 2}}) {
    auto p = random_point(rng, m, n);
    auto pd = PointData::make(p);
    auto estar = unity_cotangent(p);
    for (int trial = 0; trial < 8; ++trial) {
      auto w1 = random_covector(rng, p);
      auto w2 = random_covector(rng, p);
      auto w3 = random_covector(rng, p);

      CHECK(covec_diff(star(pd, estar, w1), w1) < 1e-10);
      CHECK(covec_diff(star(pd, w1, estar), w1) < 1e-10);
      CHECK(covec_diff(star(pd, w1, w2), star(pd, w2, w1)) < 1e-12);

      auto left = star(pd, star(pd, w1, w2), w3);
      auto right = star(pd, w1, star(pd, w2, w3));
      CHECK(covec_diff(left, right) < 1e-10);
    }
  }
}

TEST_CASE("circ product: unity, invariance, associativity") {
  Rng rng(210);
  for (auto [m, n] : {std::pair{1, 1}, {2, 1}}) {
    auto p = random_point(rng, m, n);
    auto pd = PointData::make(p);
    TangentVec e = unity_field(pd);
    for (int trial = 0; trial < 5; ++trial) {
      auto v1 = random_tangent(rng, p);
      auto v2 = random_tangent(rng, p);
      auto v3 = random_tangent(rng, p);

      CHECK(vec_diff(circ(pd, e, v1), v1) < 1e-9);

      // full symmetry of <v1 o v2, v3>
      Complex base = metric(pd, circ(pd, v1, v2), v3);
      CHECK(std::abs(metric(pd, circ(pd, v2, v1), v3) - base) < 1e-9);
      CHECK(std::abs(metric(pd, circ(pd, v1, v3), v2) - base) < 1e-9);
      CHECK(std::abs(metric(pd, circ(pd, v3, v2), v1) - base) < 1e-9);

      auto left = circ(pd, circ(pd, v1, v2), v3);
      auto right = circ(pd, v1, circ(pd, v2, v3));
      CHECK(vec_diff(left, right) < 1e-9);
    }
  }
}

TEST_CASE("3-tensor: direct formulas against the pairing route") {
  Rng rng(211);
  for (auto [m, n] : {std::pair{1, 1}, {2, 1}, {2, 2}}) {
    auto p = random_point(rng, m, n);
    auto pd = PointData::make(p);
    auto labels = all_labels(m, n, 2);
    for (std::size_t x = 0; x < labels.size(); ++x)
      for (std::size_t y = x; y < labels.size(); ++y)
        for (std::size_t z = y; z < labels.size(); ++z) {
          Complex direct = c_tensor(pd, labels[x], labels[y], labels[z], CMethod::kDirect);
          Complex paired = c_tensor(pd, labels[x], labels[y], labels[z], CMethod::kPairing);
          CHECK(std::abs(direct - paired) < 1e-8);
        }
  }
}

TEST_CASE("3-tensor symmetry and the vanishing mixed family") {
  Rng rng(212);
  auto p = random_point(rng, 2, 1);
  auto pd = PointData::make(p);
  CoordLabel t1{CoordLabel::Kind::kT, 1}, tm2{CoordLabel::Kind::kT, -2},
      h1{CoordLabel::Kind::kH, 1}, k1{CoordLabel::Kind::kHhat, 1}, k0{CoordLabel::Kind::kHhat, 0};

  Complex base = c_tensor(pd, t1, tm2, h1, CMethod::kPairing);
  CHECK(std::abs(c_tensor(pd, tm2, t1, h1, CMethod::kPairing) - base) < 1e-9);
  CHECK(std::abs(c_tensor(pd, h1, tm2, t1, CMethod::kPairing) - base) < 1e-9);
  CHECK(std::abs(c_tensor(pd, t1, h1, tm2, CMethod::kPairing) - base) < 1e-9);

  // c(t, h, hhat) = 0
  for (const auto& t : {t1, tm2})
    for (const auto& k : {k0, k1}) {
      CHECK(std::abs(c_tensor(pd, t, h1, k, CMethod::kPairing)) < 1e-10);
      CHECK(c_tensor(pd, t, h1, k, CMethod::kDirect) == Complex(0.0));
    }
}

TEST_CASE("potential derivative formulas") {
  // zeta = z makes V1 the monomial integral
  const Complex phi{0.07, 0.02};
  LaurentSeries z(Chart::kPhi, phi, {{1, 1.0}, {0, phi}});
  LaurentSeries ell = z + LaurentSeries::monomial(Chart::kPhi, phi, -1, Complex(0.55, 0.2));
  PointMn p = make_point(1, 1, phi, ell, z);
  auto pd = PointData::make(p);
  for (int i1 = -2; i1 <= 2; ++i1)
    for (int i2 = -2; i2 <= 2; ++i2) {
      Complex expected = (i1 + i2 == 0) ? 1.0 : 0.0;
      CHECK(std::abs(v1_hessian(pd, i1, i2) - expected) < 1e-12);
    }
}

TEST_CASE("G third derivatives: direct vs reduced form and FD symmetry") {
  Rng rng(213);
  auto p = random_point(rng, 3, 2);
  auto pd = PointData::make(p);

  // reduced form: G_{h_{j1} h_{j2} hhat_k} = -res_inf (ell' chi^{-j1-j2})_+ d_hhat_k ell dz
  for (int j1 = 1; j1 <= 2; ++j1)
    for (int j2 = j1; j2 <= 2; ++j2)
      for (int k = 1; k <= 2; ++k) {
        Complex direct = g_third(pd, {CoordLabel::Kind::kH, j1}, {CoordLabel::Kind::kH, j2},
                                 {CoordLabel::Kind::kHhat, k});
        LaurentSeries plus_part = dell_dh(p.ell, p.m, p.n, 0);
        // (ell' chi^{-j1-j2})_+ via the same Jacobian-column helper family
        LaurentSeries sum_col = [&] {
          LaurentSeries chi_pow = power_rational(pd.ell_inf, -(j1 + j2), p.m, pd.depth);
          LaurentSeries prod = pd.dell_inf * chi_pow;
          return truncate_ge(prod, 0);
        }();
        LaurentSeries dk = reexpand_infinity(dell_dhhat(p.ell, p.m, p.n, k), pd.depth);
        Complex reduced = (sum_col * dk).coeff(-1);  // -res_inf(...) = +[z^{-1}]
        CHECK(std::abs(direct - reduced) < 1e-9);
        (void)plus_part;
      }

  // FD symmetry of the third derivative in the fourth label
  auto grid = point_grid(p);
  FlatCoords fc = flat_coordinates(p, grid, 4);
  const double eps = 1e-5;
  auto g3_at = [&](FlatCoords f, const CoordLabel& u, const CoordLabel& v, const CoordLabel& w) {
    PointMn q = point_from_flat(f, p.m, p.n, 16, 1.0, 256, &p);
    auto qd = PointData::make(q);
    return g_third(qd, u, v, w);
  };
  CoordLabel u{CoordLabel::Kind::kH, 1}, v{CoordLabel::Kind::kH, 2}, w{CoordLabel::Kind::kHhat, 1},
      s{CoordLabel::Kind::kHhat, 2};
  auto bump = [&](const CoordLabel& l, double step) {
    FlatCoords f = fc;
    if (l.kind == CoordLabel::Kind::kH)
      f.h[static_cast<std::size_t>(l.index - 1)] += step;
    else
      f.hhat[static_cast<std::size_t>(l.index)] += step;
    return f;
  };
  Complex ds = (g3_at(bump(s, eps), u, v, w) - g3_at(bump(s, -eps), u, v, w)) / (2 * eps);
  Complex dw = (g3_at(bump(w, eps), u, v, s) - g3_at(bump(w, -eps), u, v, s)) / (2 * eps);
  CHECK(std::abs(ds - dw) < 1e-4);
}

TEST_CASE("second potential: hessian derivative is symmetric across indices") {
  Rng rng(218);
  auto p = random_flat_point(rng, 3, 1, 6);
  auto grid = point_grid(p);
  FlatCoords fc = flat_coordinates(p, grid, 6);
  const double eps = 1e-5;
  auto v2_at = [&](int j_bump, double step, int j1, int j2) {
    FlatCoords f2 = fc;
    f2.h[static_cast<std::size_t>(j_bump - 1)] += step;
    PointMn q = point_from_flat(f2, p.m, p.n, 16, 1.0, 256, &p);
    auto qd = PointData::make(q);
    return v2_hessian(qd, j1, j2);
  };
  Complex d3_a = (v2_at(2, eps, 1, 1) - v2_at(2, -eps, 1, 1)) / (2 * eps);
  Complex d3_b = (v2_at(1, eps, 1, 2) - v2_at(1, -eps, 1, 2)) / (2 * eps);
  CHECK(std::abs(d3_a - d3_b) < 1e-4);
  // the charge enters the homogeneity weight as 3 - d = 2 + 2/m
  CHECK(3.0 - charge(p) == doctest::Approx(2.0 + 2.0 / p.m));
}

TEST_CASE("log kernel identities and refinement") {
  Rng rng(214);
  const Complex phi{0.06, -0.03};
  CircleGrid inner{phi, 1.0, 256};
  CircleGrid outer{phi, 4.0, 256};

  // random truncated f: inner integral of f'(w) log((Z-w)/Z) equals f(Z)_-
  LaurentSeries::CoeffMap fm;
  for (int e = -5; e <= 5; ++e) fm[e] = rng.disc(std::pow(2.0, -std::abs(e)));
  LaurentSeries f(Chart::kPhi, phi, std::move(fm));
  auto df_in = samples_of(derivative(f), inner);
  LaurentSeries f_minus = project(f, Projection::kMinus);
  LaurentSeries f_plus = project(f, Projection::kPlus);
  for (int j = 0; j < outer.n; j += 37) {
    const Complex z1 = outer.node(j);
    SampledFunction integrand = df_in;
    for (int l = 0; l < inner.n; ++l) {
      const Complex z2 = inner.node(l);
      integrand.values[static_cast<std::size_t>(l)] *= std::log((z1 - z2) / z1);
    }
    CHECK(std::abs(contour_integral(integrand) - evaluate(f_minus, z1)) < 1e-8);
  }
  // outer integral of f'(z1) log((z1-z2)/z1) equals -f(z2)_+ + (1/2 pi i) oint f/z
  auto df_out = samples_of(derivative(f), outer);
  SampledFunction f_over_z = samples_of(f, inner);
  for (int l = 0; l < inner.n; ++l)
    f_over_z.values[static_cast<std::size_t>(l)] /= inner.node(l);
  const Complex mean_term = contour_integral(f_over_z);
  for (int l = 0; l < inner.n; l += 41) {
    const Complex z2 = inner.node(l);
    SampledFunction integrand = df_out;
    for (int j = 0; j < outer.n; ++j) {
      const Complex z1 = outer.node(j);
      integrand.values[static_cast<std::size_t>(j)] *= std::log((z1 - z2) / z1);
    }
    CHECK(std::abs(contour_integral(integrand) - (-evaluate(f_plus, z2) + mean_term)) < 1e-8);
  }

  // vanishing zeta kills the kernel integrand
  LaurentSeries zero = LaurentSeries::zero(Chart::kPhi, phi);
  CHECK(std::abs(kernel_double_integral(zero, f, inner, 4.0)) == 0.0);

  // grid refinement stability of the double integral
  Rng rng2(215);
  auto p = random_point(rng2, 2, 1);
  auto pd = PointData::make(p);
  Complex coarse = potential_kernel(pd, 4.0);
  auto pd_fine = PointData::make(p, 1.0, 512);
  Complex fine = potential_kernel(pd_fine, 4.0);
  CHECK(std::abs(coarse - fine) < 1e-7 * std::max(1.0, std::abs(coarse)));
  CHECK_THROWS_AS(potential_kernel(pd, 0.5), DomainError);
}

TEST_CASE("g map: round trip, intersection form, closed form") {
  Rng rng(216);
  for (auto [m, n] : {std::pair{1, 1}, {2, 2}}) {
    auto p = random_point(rng, m, n);
    auto pd = PointData::make(p);
    TangentVec e_field = euler_vector(p);

    for (int trial = 0; trial < 8; ++trial) {
      auto w = random_covector(rng, p);
      auto back = g_inverse(pd, g_apply(pd, w));
      CHECK(covec_diff(back, w) < 1e-9);

      // (w1, w2)* = i_E(w1 * w2)
      auto w2 = random_covector(rng, p);
      Complex lhs = pair_vectors(w2, g_apply(pd, w));
      Complex rhs = pair_vectors(star(pd, w2, w), e_field);
      CHECK(std::abs(lhs - rhs) < 1e-9);
    }

    // closed form on generating covectors
    const Complex pp = p.phi + Complex(2.8, 0.4), qq = p.phi + Complex(2.3, -1.6);
    auto w1 = da_covector(p, pp, 60);
    auto w2 = da_covector(p, qq, 60);
    Complex got = pair_vectors(w1, g_apply(pd, w2));
    Complex expected = evaluate(pd.da, pp) * evaluate(pd.a, qq) / (pp - qq) +
                       evaluate(pd.da, qq) * evaluate(pd.a, pp) / (qq - pp) +
                       evaluate(pd.da, pp) * evaluate(pd.da, qq) / static_cast<double>(m);
    CHECK(std::abs(got - expected) < 1e-8);

    // mixed kind: (da(p), dahat(q))*
    const Complex qin = p.phi + Complex(0.4, 0.12);
    auto wh = dahat_covector(p, qin, 60);
    Complex got2 = pair_vectors(w1, g_apply(pd, wh));
    Complex expected2 = evaluate(pd.da, pp) * evaluate(pd.ahat, qin) / (pp - qin) +
                        evaluate(pd.dahat, qin) * evaluate(pd.a, pp) / (qin - pp) +
                        evaluate(pd.da, pp) * evaluate(pd.dahat, qin) / static_cast<double>(m);
    CHECK(std::abs(got2 - expected2) < 1e-8);
  }
}

TEST_CASE("euler field pushes forward to the degree-weighted coordinates") {
  Rng rng(217);
  for (auto [m, n] : {std::pair{1, 1}, {2, 1}, {3, 2}}) {
    auto p = random_point(rng, m, n);
    auto pd = PointData::make(p);
    auto grid = point_grid(p);
    FlatCoords fc = flat_coordinates(p, grid, 5);
    TangentVec e_field = euler_vector(p);

    // metric(dt_j, E) = -E^{t_{-1-j}} with E^{t_i} = (1/m - i) t_i
    for (int j = -4; j <= 4; ++j) {
      Complex got = metric(pd, flat_tangent(pd, {CoordLabel::Kind::kT, j}), e_field);
      Complex expected = -(1.0 / m - (-1 - j)) * fc.t[-1 - j];
      CHECK(std::abs(got - expected) < 1e-8);
    }
    for (int j = 1; j <= m - 1; ++j) {
      Complex got = metric(pd, flat_tangent(pd, {CoordLabel::Kind::kH, j}), e_field);
      Complex expected = static_cast<double>(m - j + 1) *
                         fc.h[static_cast<std::size_t>(m - j - 1)];
      CHECK(std::abs(got - expected) < 1e-8);
    }
    for (int k = 0; k <= n; ++k) {
      Complex got = metric(pd, flat_tangent(pd, {CoordLabel::Kind::kHhat, k}), e_field);
      double factor = static_cast<double>(n) * (1.0 / m + static_cast<double>(n - k) / n);
      Complex expected = factor * fc.hhat[static_cast<std::size_t>(n - k)];
      CHECK(std::abs(got - expected) < 1e-8);
    }
  }
}
