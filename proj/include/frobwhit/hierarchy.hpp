#pragma once

#include <functional>
#include <string>
#include <vector>

#include "frobwhit/frobenius.hpp"

namespace frobwhit {

// A truncated Fourier function on the loop S^1 = R/Z, stored by its values
// at the equispaced collocation nodes x_q = q / nodes.
class LoopScalar {
 public:
  LoopScalar() = default;
  explicit LoopScalar(int nodes, Complex fill = 0.0)
      : v_(static_cast<std::size_t>(nodes), fill) {}
  explicit LoopScalar(std::vector<Complex> values) : v_(std::move(values)) {}

  int nodes() const { return static_cast<int>(v_.size()); }
  Complex& at(int q) { return v_[static_cast<std::size_t>(q)]; }
  Complex at(int q) const { return v_[static_cast<std::size_t>(q)]; }
  const std::vector<Complex>& values() const { return v_; }

  // modes k = -nodes/2+1 .. nodes/2-1 (the Nyquist mode is dropped)
  std::vector<Complex> modes() const;
  static LoopScalar from_modes(const std::vector<Complex>& m, int nodes);

  LoopScalar dx() const;              // spectral derivative
  LoopScalar filtered(int max_mode) const;  // drop modes with |k| > max_mode
  LoopScalar antiderivative_x() const;  // zero-mean spectral antiderivative
  Complex mean() const;
  double sup_abs() const;
  bool is_zero() const;

  friend LoopScalar operator+(const LoopScalar& a, const LoopScalar& b);
  friend LoopScalar operator-(const LoopScalar& a, const LoopScalar& b);
  friend LoopScalar operator*(const LoopScalar& a, const LoopScalar& b);
  friend LoopScalar operator*(Complex s, const LoopScalar& a);
  friend LoopScalar operator-(const LoopScalar& a);

 private:
  std::vector<Complex> v_;
};

// z-Laurent series with loop-scalar coefficients; in the phi chart the base
// point phi(x) moves with the loop, so the exponent-k coefficient array is
// read in the local (z - phi(x_q)) chart at each node.
struct LoopSeries {
  Chart chart = Chart::kPhi;
  LoopScalar phi;  // per-node base points (all zero in the inf chart)
  std::map<int, LoopScalar> coeffs;
  Window window = Window::all();

  int nodes() const { return phi.nodes(); }
  LaurentSeries at_node(int q) const;
  static LoopSeries gather(const LoopScalar& phi, const std::vector<LaurentSeries>& per_node);
  static LoopSeries zero(const LoopScalar& phi) { return LoopSeries{Chart::kPhi, phi, {}, Window::all()}; }
  LoopScalar coeff(int e) const;  // trusted read, zero off support
  double sup_abs() const;
};

LoopSeries operator+(const LoopSeries& a, const LoopSeries& b);
LoopSeries operator-(const LoopSeries& a, const LoopSeries& b);
LoopSeries operator-(const LoopSeries& a);
LoopSeries operator*(Complex s, const LoopSeries& a);
LoopSeries loop_mul(const LoopSeries& a, const LoopSeries& b);
LoopSeries loop_scale(const LoopScalar& s, const LoopSeries& a);
LoopSeries loop_dz(const LoopSeries& a);
// x-derivative at fixed z: the coefficientwise derivative minus phi'(x) d/dz
LoopSeries loop_dx(const LoopSeries& a);
LoopSeries loop_truncate_ge(const LoopSeries& a, int k);
LoopSeries loop_truncate_le(const LoopSeries& a, int k);
LoopSeries loop_filter_modes(const LoopSeries& a, int max_mode);

// [f, g] = f_z g_x - g_z f_x
LoopSeries lie_bracket(const LoopSeries& f, const LoopSeries& g);

struct LoopPoint {
  int m = 1;
  int n = 1;
  int fourier_modes = 8;  // the state lives on |k| <= fourier_modes
  LoopScalar phi;
  LoopSeries ell;   // forced head coefficients track phi(x)
  LoopSeries zeta;

  int nodes() const { return phi.nodes(); }
  PointMn at_node(int q) const;
  double sup_abs() const;
};

struct LoopTangent {
  LoopSeries xi, xi_hat;
  double sup_abs() const { return std::max(xi.sup_abs(), xi_hat.sup_abs()); }
};

struct LoopCotangent {
  LoopSeries omega, omega_hat;
};

// x-independent promotion and node-wise validity.
LoopPoint loop_from_point(const PointMn& p, int nodes);
bool loop_valid(const LoopPoint& p, double radius = 1.0, int grid_n = 256);

// the (a, ahat) pair of a loop point
std::pair<LoopSeries, LoopSeries> loop_pair(const LoopPoint& p);

// mean over x of the node-wise pairing
Complex pair_loop(const LoopCotangent& w, const LoopTangent& v);

// Poisson tensors of the bihamiltonian pair; nu = 1 or 2.
LoopTangent poisson_apply(const LoopPoint& p, const LoopCotangent& w, int nu);
// sigma = (1/m) res_phi([omega, a] + [omega_hat, ahat])
LoopScalar poisson_sigma(const LoopPoint& p, const LoopCotangent& w);

// lambda = a^{1/m} at infinity, lambdahat = ahat^{1/n} at the base point.
LoopSeries lambda_root(const LoopPoint& p, bool hatted, int depth = 24);

struct Flow {
  bool hatted = false;
  int k = 1;
};

LoopTangent whitham_rhs(const LoopPoint& p, Flow flow);

Complex hamiltonian(const LoopPoint& p, int k, bool hatted);
LoopCotangent var_gradient(const LoopPoint& p, int k, bool hatted);

// First-order state update along a tangent: phi moves by the coefficient of
// (z-phi)^{-n-1} in xi_hat over n ell_{-n}, and the chart coefficients are
// corrected by phi' times the z-derivative.
LoopPoint apply_tangent(const LoopPoint& p, const LoopTangent& v, double eps);

// max relative error of FD directional derivatives of H against the pairing
// with var_gradient, over the given number of random directions
double gradient_fd_residual(const LoopPoint& p, int k, bool hatted, Rng& rng, int directions,
                            double eps = 1e-6);

LoopTangent random_loop_tangent(Rng& rng, const LoopPoint& p, int modes, double amp);
LoopCotangent random_loop_cotangent(Rng& rng, const LoopPoint& p, int modes, double amp);
LoopPoint random_loop_point(Rng& rng, int m, int n, int modes, int nodes, double amp = 0.02,
                            int max_retries = 100);

struct RecursionResiduals {
  double p1_vs_p2 = 0.0;   // |P1 dH_{k+m} - P2 dH_k| / point sup
  double p2_vs_rhs = 0.0;  // |P2 dH_k - flow RHS| / point sup
};
RecursionResiduals recursion_residual(const LoopPoint& p, int k, bool hatted);

struct LocalFunctional {
  std::string label;
  std::function<Complex(const LoopPoint&)> value;
  std::function<LoopCotangent(const LoopPoint&)> gradient;
};

Complex poisson_bracket(const LocalFunctional& f, const LocalFunctional& h, const LoopPoint& p,
                        int nu);

// linear coefficient functional int sum_e g_e a_{-1-e}(x) dx on the a (or
// ahat) slot, with the exact variational gradient including the phi-motion
// correction
LocalFunctional coefficient_functional(const LaurentSeries& g, bool hatted_slot,
                                       const std::string& label);
LocalFunctional product_functional(const LocalFunctional& f, const LocalFunctional& g);

double tangent_diff(const LoopTangent& a, const LoopTangent& b);

struct Trajectory {
  double dt = 0.0;
  std::vector<LoopPoint> states;                  // steps + 1 entries
  std::vector<int> tracked;                       // hamiltonian indices
  std::vector<std::vector<Complex>> hamiltonians;  // per state, per tracked k
};

// classical RK4 on the Fourier x Laurent coefficients; halts with
// ConvergenceError if validity is lost mid-trajectory
Trajectory evolve(const LoopPoint& p, Flow flow, double dt, int steps,
                  const std::vector<int>& track = {1, 2});

}  // namespace frobwhit
