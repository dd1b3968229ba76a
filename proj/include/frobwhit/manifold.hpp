#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "frobwhit/contour.hpp"
#include "frobwhit/series.hpp"

namespace frobwhit {

// A point of the space of pairs (a, ahat) of meromorphic functions with a
// fixed pole at infinity of order m and a movable pole of order n at phi,
// held in the equivalent (zeta, ell) form: a = zeta_- + ell and
// ahat = -zeta_+ + ell.
struct PointMn {
  int m = 1;
  int n = 1;
  Complex phi{0.0};
  LaurentSeries ell;   // phi chart, exponents -n..m, top two coefficients forced
  LaurentSeries zeta;  // phi chart, two-sided
};

// Builds a point, forcing ell's (z-phi)^m and (z-phi)^{m-1} coefficients to
// the values dictated by the z^m head; throws DomainError on bad shapes.
PointMn make_point(int m, int n, Complex phi, const LaurentSeries& ell,
                   const LaurentSeries& zeta);

std::pair<LaurentSeries, LaurentSeries> to_pair(const PointMn& p);

// charge of the associated Frobenius structure
inline double charge(const PointMn& p) { return 1.0 - 2.0 / p.m; }
PointMn point_from_pair(int m, int n, Complex phi, const LaurentSeries& a,
                        const LaurentSeries& ahat);

struct ValidityReport {
  bool c1 = false;
  bool c2 = false;
  bool c3 = false;
  double abs_ell_low = 0.0;      // |ell_{-n}|
  double min_abs_dzeta = 0.0;    // min |zeta'| on the contour
  double min_abs_dell = 0.0;     // min |ell'|
  double min_abs_wronskian = 0.0;  // min |a' ahat - a ahat'|
  int winding = 0;
  bool ok() const { return c1 && c2 && c3; }
  std::string summary() const;
};

// The contour of a point: a circle of the given radius centered at phi.
CircleGrid point_grid(const PointMn& p, double radius = 1.0, int n = 256);

// Never throws; reports the attained minima and the winding number.
ValidityReport validate(const PointMn& p, const CircleGrid& grid);

struct FlatCoords {
  int i_max = 8;
  std::map<int, Complex> t;     // |i| <= i_max
  std::vector<Complex> h;       // h[j-1] = h_j, j = 1..m-1
  std::vector<Complex> hhat;    // hhat[k] = hhat_k, k = 0..n; hhat_0 = phi
};

struct CoordLabel {
  enum class Kind { kT, kH, kHhat };
  Kind kind = Kind::kT;
  int index = 0;

  std::string str() const;
  friend bool operator<(const CoordLabel& a, const CoordLabel& b) {
    return a.kind != b.kind ? a.kind < b.kind : a.index < b.index;
  }
  friend bool operator==(const CoordLabel& a, const CoordLabel& b) = default;
};

void check_label(const CoordLabel& label, int m, int n, int i_max);

// deg t_i = 1/m - i,  deg h_j = (j+1)/m,  deg hhat_k = k/n + 1/m
double coordinate_degree(const CoordLabel& label, int m, int n);

// Contour-integral flat coordinates of a valid point.
FlatCoords flat_coordinates(const PointMn& p, const CircleGrid& grid, int i_max);

// h_1..h_{m-1} and hhat_1..hhat_n of an ell series alone.
std::pair<std::vector<Complex>, std::vector<Complex>> h_coordinates(const LaurentSeries& ell,
                                                                    int m, int n);

// Jacobian columns of ell -> (h, hhat): dl/dh_j = (ell' chi^{-j})_+ and
// dl/dhhat_k = -(ell' chihat^{-k})_-, both exact finite phi-chart series.
LaurentSeries dell_dh(const LaurentSeries& ell, int m, int n, int j);
LaurentSeries dell_dhhat(const LaurentSeries& ell, int m, int n, int k);

// Inverse of flat_coordinates in the perturbative regime: zeta is recovered
// by a per-node Newton solve of z(zeta) = z_j on the circle of the given
// radius around hhat_0, ell by Newton on the (h, hhat) map with its exact
// Jacobian. An optional seed point primes the ell solve.
PointMn point_from_flat(const FlatCoords& fc, int m, int n, int zeta_halfwidth,
                        double radius = 1.0, int grid_n = 256, const PointMn* seed = nullptr);

// Tangent and cotangent vectors at a point, as pairs of phi-chart series:
// xi has exponents <= m-2, xi_hat has exponents >= -n-1; omega has exponents
// >= -m+1, omega_hat has exponents <= n.
struct TangentVec {
  LaurentSeries xi;
  LaurentSeries xi_hat;
};

struct CotangentVec {
  LaurentSeries omega;
  LaurentSeries omega_hat;
};

// Hard truncation to the shape exponent ranges; throws DomainError when the
// dropped mass exceeds 1e-10 of the vector's sup norm.
TangentVec to_tangent_shape(const PointMn& p, const LaurentSeries& xi,
                            const LaurentSeries& xi_hat);
CotangentVec to_cotangent_shape(const PointMn& p, const LaurentSeries& omega,
                                const LaurentSeries& omega_hat);

// Euler field in Laurent form: (a - z a'/m, ahat - z ahat'/m).
TangentVec euler_vector(const PointMn& p);

// Seeded generator of valid points; throws ConvergenceError after
// max_retries failed validity draws.
PointMn random_point(Rng& rng, int m, int n, double radius = 1.0, int grid_n = 256,
                     int zeta_halfwidth = 16, int max_retries = 100);

// A point sampled through the flat chart: random_point's flat coordinates
// are truncated to |i| <= i_max and pushed back through point_from_flat, so
// the result is exactly representable by its own coordinates.
PointMn random_flat_point(Rng& rng, int m, int n, int i_max, double radius = 1.0,
                          int grid_n = 256, int zeta_halfwidth = 16, int max_retries = 100);

// The grading action (zeta, ell) -> (s zeta, s ell), z -> s^{1/m} z realized
// on the stored coefficients; each flat coordinate u picks up s^{deg u}.
PointMn rescale_point(const PointMn& p, double s);

}  // namespace frobwhit
