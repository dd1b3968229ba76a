#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "frobwhit/manifold.hpp"

using namespace frobwhit;

namespace {

LaurentSeries z_in_phi_chart(Complex phi) {
  return LaurentSeries(Chart::kPhi, phi, {{1, 1.0}, {0, phi}});
}

// z^m as a phi-chart polynomial
LaurentSeries z_pow(int m, Complex phi) {
  auto z = z_in_phi_chart(phi);
  auto acc = LaurentSeries::constant(Chart::kPhi, phi, 1.0);
  for (int i = 0; i < m; ++i) acc = acc * z;
  return acc;
}

}  // namespace

TEST_CASE("pair conversion formulas") {
  const Complex phi{0.05, 0.02};
  const Complex b{0.4, 0.1};

  // zeta = 0 degenerates to a = ahat = ell
  auto ell = z_pow(1, phi) + LaurentSeries::monomial(Chart::kPhi, phi, -1, b);
  PointMn p = make_point(1, 1, phi, ell, LaurentSeries::zero(Chart::kPhi, phi));
  auto [a0, ah0] = to_pair(p);
  CHECK(max_abs_diff(a0, ell) == 0.0);
  CHECK(max_abs_diff(ah0, ell) == 0.0);

  // zeta = z has no negative part, so a = ell and ahat = -z + ell
  PointMn q = make_point(1, 1, phi, ell, z_in_phi_chart(phi));
  auto [a, ahat] = to_pair(q);
  CHECK(max_abs_diff(a, ell) == 0.0);
  CHECK(max_abs_diff(ahat, ell - z_in_phi_chart(phi)) == 0.0);
}

TEST_CASE("pair conversion is an involution on random points") {
  Rng rng(101);
  for (auto [m, n] : {std::pair{1, 1}, {2, 1}, {1, 2}, {3, 2}}) {
    auto p = random_point(rng, m, n);
    auto [a, ahat] = to_pair(p);
    PointMn back = point_from_pair(m, n, p.phi, a, ahat);
    CHECK(max_abs_diff(back.ell, p.ell) < 1e-14);
    CHECK(max_abs_diff(back.zeta, p.zeta) < 1e-14);
  }
}

TEST_CASE("free parameter count of ell matches the flat coordinate count") {
  Rng rng(102);
  for (auto [m, n] : {std::pair{2, 1}, {2, 2}, {3, 2}}) {
    auto p = random_point(rng, m, n);
    // exponents -n..m-2 are free, (z-phi)^{m-1} and (z-phi)^m are forced
    int free_coeffs = (m - 2) - (-n) + 1;
    CHECK(free_coeffs == m + n - 1);
    FlatCoords fc = flat_coordinates(p, point_grid(p), 8);
    CHECK(fc.h.size() + fc.hhat.size() == static_cast<std::size_t>(free_coeffs) + 1);
  }
}

TEST_CASE("validity conditions") {
  const Complex phi{0.05, -0.03};
  auto ell = z_pow(1, phi) + LaurentSeries::monomial(Chart::kPhi, phi, -1, Complex(0.5, 0.1));
  PointMn p = make_point(1, 1, phi, ell, z_in_phi_chart(phi));
  auto rep = validate(p, point_grid(p));
  CHECK(rep.c1);
  CHECK(rep.c2);
  CHECK(rep.c3);
  CHECK(rep.winding == 1);

  // ell_{-n} = 0 violates C1
  PointMn bad = make_point(1, 1, phi, z_pow(1, phi), z_in_phi_chart(phi));
  CHECK_FALSE(validate(bad, point_grid(bad)).c1);

  // zeta = z^2 has winding 2
  PointMn w2 = make_point(1, 1, phi, ell, z_pow(2, phi));
  auto rep2 = validate(w2, point_grid(w2));
  CHECK(rep2.winding == 2);
  CHECK_FALSE(rep2.c3);
}

TEST_CASE("flat coordinates of zeta = z") {
  const Complex phi{0.08, 0.0};
  auto ell = z_pow(1, phi) + LaurentSeries::monomial(Chart::kPhi, phi, -1, Complex(0.6, 0.2));
  PointMn p = make_point(1, 1, phi, ell, z_in_phi_chart(phi));
  FlatCoords fc = flat_coordinates(p, point_grid(p), 6);
  for (int i = -6; i <= 6; ++i) {
    if (i == 1)
      CHECK(std::abs(fc.t[i] - 1.0) < 1e-13);
    else
      CHECK(std::abs(fc.t[i]) < 1e-13);
  }
}

TEST_CASE("h and hhat residues for m=2, n=1") {
  const Complex c{0.3, -0.1}, b{0.5, 0.2};
  auto ell = LaurentSeries(Chart::kPhi, 0.0, {{2, 1.0}, {0, c}, {-1, b}});
  auto [h, hhat] = h_coordinates(ell, 2, 1);
  REQUIRE(h.size() == 1);
  REQUIRE(hhat.size() == 1);
  CHECK(std::abs(h[0] - c / 2.0) < 1e-13);   // ell^{1/2} = z + c/(2z) + ...
  CHECK(std::abs(hhat[0] - b) < 1e-13);      // res_phi ell = b

  PointMn p = make_point(2, 1, 0.0, ell, z_in_phi_chart(0.0));
  FlatCoords fc = flat_coordinates(p, point_grid(p), 4);
  CHECK(std::abs(fc.hhat[0]) == 0.0);
  CHECK(std::abs(fc.h[0] - c / 2.0) < 1e-13);
  CHECK(std::abs(fc.hhat[1] - b) < 1e-13);
}

TEST_CASE("t coordinates agree with the change-of-variables form") {
  Rng rng(104);
  for (auto [m, n] : {std::pair{1, 1}, {2, 2}}) {
    auto p = random_point(rng, m, n);
    auto grid = point_grid(p);
    FlatCoords fc = flat_coordinates(p, grid, 6);
    auto zs = samples_of(p.zeta, grid);
    auto dzs = samples_of(derivative(p.zeta), grid);
    for (int i = -6; i <= 6; ++i) {
      if (i == 0) continue;
      // t_i = (1/2 pi i) contour integral of z zeta^{-i-1} zeta' dz
      SampledFunction f = zs;
      for (int j = 0; j < grid.n; ++j) {
        auto u = static_cast<std::size_t>(j);
        f.values[u] = grid.node(j) * std::pow(zs.values[u], static_cast<double>(-i - 1)) *
                      dzs.values[u];
      }
      CHECK(std::abs(contour_integral(f) - fc.t[i]) < 1e-10);
    }
  }
}

TEST_CASE("point_from_flat reproduces a known ell") {
  const Complex c{0.3, -0.1}, b{0.5, 0.2};
  auto ell = LaurentSeries(Chart::kPhi, 0.0, {{2, 1.0}, {0, c}, {-1, b}});
  auto [h, hhat] = h_coordinates(ell, 2, 1);
  FlatCoords fc;
  fc.i_max = 4;
  for (int i = -4; i <= 4; ++i) fc.t[i] = (i == 1) ? 1.0 : 0.0;
  fc.h = h;
  fc.hhat = {Complex(0.0), hhat[0]};
  PointMn p = point_from_flat(fc, 2, 1, 16);
  CHECK(max_abs_diff(p.ell, ell, -1, 2) < 1e-10);
  // zeta solves z(zeta) = z exactly
  CHECK(std::abs(p.zeta.coeff(1) - 1.0) < 1e-12);
  CHECK(std::abs(p.zeta.coeff(-3)) < 1e-12);
}

TEST_CASE("m=1 points are determined by hhat alone") {
  Rng rng(105);
  auto p = random_point(rng, 1, 2);
  FlatCoords fc = flat_coordinates(p, point_grid(p), 8);
  CHECK(fc.h.empty());
  PointMn q = point_from_flat(fc, 1, 2, 16);
  auto [h2, hhat2] = h_coordinates(q.ell, 1, 2);
  for (int k = 1; k <= 2; ++k)
    CHECK(std::abs(hhat2[static_cast<std::size_t>(k - 1)] - fc.hhat[static_cast<std::size_t>(k)]) <
          1e-11);
  CHECK(max_abs_diff(q.ell, p.ell) < 1e-10);
}

TEST_CASE("flat round trip on representable points") {
  Rng rng(106);
  for (auto [m, n] : {std::pair{1, 1}, {2, 1}, {2, 2}}) {
    auto p = random_flat_point(rng, m, n, 8);
    FlatCoords fc = flat_coordinates(p, point_grid(p), 8);
    PointMn q = point_from_flat(fc, m, n, 16, 1.0, 256, &p);
    CHECK(max_abs_diff(q.ell, p.ell) < 1e-8);
    CHECK(max_abs_diff(q.zeta, p.zeta, -8, 8) < 1e-8);
    FlatCoords fc2 = flat_coordinates(q, point_grid(q), 8);
    for (const auto& [i, ti] : fc.t) CHECK(std::abs(fc2.t[i] - ti) < 1e-9);
    for (std::size_t j = 0; j < fc.h.size(); ++j) CHECK(std::abs(fc2.h[j] - fc.h[j]) < 1e-9);
    for (std::size_t k = 0; k < fc.hhat.size(); ++k)
      CHECK(std::abs(fc2.hhat[k] - fc.hhat[k]) < 1e-9);
  }
}

TEST_CASE("direct generator round trip is limited by dropped t modes") {
  Rng rng(107);
  auto p = random_point(rng, 2, 1);
  FlatCoords fc = flat_coordinates(p, point_grid(p), 8);
  PointMn q = point_from_flat(fc, 2, 1, 16, 1.0, 256, &p);
  // the (h, hhat) <-> ell correspondence involves no truncation at all
  CHECK(max_abs_diff(q.ell, p.ell) < 1e-9);
  // zeta only agrees up to the weight of the t modes beyond i_max
  CHECK(max_abs_diff(q.zeta, p.zeta, -8, 8) < 1e-3);
}

TEST_CASE("point_from_flat rejects coordinates that leave the chart") {
  // hhat_1 = 0 forces ell_{-1} = 0, which violates C1; the solve must report
  FlatCoords fc;
  fc.i_max = 2;
  for (int i = -2; i <= 2; ++i) fc.t[i] = (i == 1) ? 1.0 : 0.0;
  fc.hhat = {Complex(0.0), Complex(0.0)};
  CHECK_THROWS_AS(point_from_flat(fc, 1, 1, 16), Error);
}

TEST_CASE("euler field in Laurent form") {
  const Complex phi{0.06, 0.01};
  const Complex b{0.45, -0.2};
  auto ell = z_pow(1, phi) + LaurentSeries::monomial(Chart::kPhi, phi, -1, b);
  PointMn p = make_point(1, 1, phi, ell, z_in_phi_chart(phi));
  TangentVec e = euler_vector(p);
  // for a = z + b/(z-phi): a - z a' = 2b (z-phi)^{-1} + b phi (z-phi)^{-2}
  CHECK(std::abs(e.xi.coeff(-1) - 2.0 * b) < 1e-14);
  CHECK(std::abs(e.xi.coeff(-2) - b * phi) < 1e-14);
  CHECK(e.xi.coeff(0) == Complex(0.0));
  // ahat side stays inside exponents >= -n-1
  CHECK(e.xi_hat.support_min() >= -2);
}

TEST_CASE("coordinate degrees") {
  CHECK(coordinate_degree({CoordLabel::Kind::kT, 0}, 2, 1) == doctest::Approx(0.5));
  CHECK(coordinate_degree({CoordLabel::Kind::kH, 2}, 3, 1) == doctest::Approx(1.0));
  CHECK(coordinate_degree({CoordLabel::Kind::kHhat, 2}, 3, 2) == doctest::Approx(1.0 + 1.0 / 3));
  CHECK(coordinate_degree({CoordLabel::Kind::kT, -3}, 2, 1) == doctest::Approx(3.5));
  CHECK_THROWS_AS(coordinate_degree({CoordLabel::Kind::kH, 3}, 3, 1), DomainError);
  CHECK_THROWS_AS(coordinate_degree({CoordLabel::Kind::kHhat, 3}, 3, 2), DomainError);
}

TEST_CASE("grading: rescaling multiplies flat coordinates by s^deg") {
  Rng rng(108);
  const double s = 1.1;
  for (auto [m, n] : {std::pair{1, 1}, {2, 1}, {3, 2}}) {
    auto p = random_point(rng, m, n);
    auto fc = flat_coordinates(p, point_grid(p), 6);
    auto q = rescale_point(p, s);
    auto fq = flat_coordinates(q, point_grid(q), 6);
    for (int i = -6; i <= 6; ++i) {
      double deg = coordinate_degree({CoordLabel::Kind::kT, i}, m, n);
      CHECK(std::abs(fq.t[i] - std::pow(s, deg) * fc.t[i]) < 1e-8);
    }
    for (int j = 1; j <= m - 1; ++j) {
      double deg = coordinate_degree({CoordLabel::Kind::kH, j}, m, n);
      CHECK(std::abs(fq.h[static_cast<std::size_t>(j - 1)] -
                     std::pow(s, deg) * fc.h[static_cast<std::size_t>(j - 1)]) < 1e-8);
    }
    for (int k = 0; k <= n; ++k) {
      double deg = coordinate_degree({CoordLabel::Kind::kHhat, k}, m, n);
      CHECK(std::abs(fq.hhat[static_cast<std::size_t>(k)] -
                     std::pow(s, deg) * fc.hhat[static_cast<std::size_t>(k)]) < 1e-8);
    }
  }
}

TEST_CASE("flat coordinates are radius independent") {
  Rng rng(109);
  auto p = random_point(rng, 2, 2);
  auto fc1 = flat_coordinates(p, point_grid(p, 1.0), 6);
  auto fc2 = flat_coordinates(p, point_grid(p, 0.9), 6);
  for (int i = -6; i <= 6; ++i) CHECK(std::abs(fc1.t[i] - fc2.t[i]) < 1e-9);
  for (std::size_t j = 0; j < fc1.h.size(); ++j) CHECK(std::abs(fc1.h[j] - fc2.h[j]) < 1e-12);
}
