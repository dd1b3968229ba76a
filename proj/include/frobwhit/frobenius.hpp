#pragma once

#include "frobwhit/manifold.hpp"

namespace frobwhit {

// Derived data of a point frozen on its contour: the (a, ahat) pair, the
// chart roots chi = ell^{1/m} (at infinity) and chihat = ell^{1/n} (at phi),
// and the sampled traces used by the two-sided divisions.
struct PointData {
  PointMn p;
  CircleGrid grid;
  int halfwidth = 40;  // exponent half-width of sampled coefficient recovery
  int depth = 0;       // formal depth of the root/division kernels

  LaurentSeries a, ahat, da, dahat, dell, dzeta;
  LaurentSeries ell_inf, dell_inf;  // ell and ell' re-expanded at infinity
  LaurentSeries chi, chi_hat;
  SampledFunction zeta_s, dzeta_s, a_s, da_s, ahat_s, dahat_s, dell_s;

  static PointData make(const PointMn& p, double radius = 1.0, int grid_n = 512,
                        int halfwidth = 40);

  SampledFunction sample(const LaurentSeries& f) const;
  LaurentSeries from_samples(const SampledFunction& s) const;
  // zeta^i zeta' recovered as a series from its samples
  LaurentSeries z_power(int i) const;
  // ell' chi^{-j} at infinity and ell' chihat^{-k} at the base point
  LaurentSeries r_series(int j) const;
  LaurentSeries s_series(int k) const;
};

// (1/2 pi i) contour integral of (omega xi + omega_hat xi_hat), evaluated as
// an exact coefficient pairing.
Complex pair_vectors(const CotangentVec& w, const TangentVec& v);

// The metric map eta and its inverse.
TangentVec eta_apply(const PointData& pd, const CotangentVec& w);
CotangentVec eta_inverse(const PointData& pd, const TangentVec& v);

// <d1, d2>_eta as the contour + residue formula.
Complex metric(const PointData& pd, const TangentVec& v1, const TangentVec& v2);

TangentVec flat_tangent(const PointData& pd, const CoordLabel& label);
CotangentVec flat_cotangent(const PointData& pd, const CoordLabel& label);

// e* = ((1/m) (z-phi)^{-m+1}, 0) and e = eta(e*).
CotangentVec unity_cotangent(const PointMn& p);
TangentVec unity_field(const PointData& pd);

CotangentVec star(const PointData& pd, const CotangentVec& w1, const CotangentVec& w2);
TangentVec circ(const PointData& pd, const TangentVec& v1, const TangentVec& v2);

enum class CMethod { kDirect, kPairing };
Complex c_tensor(const PointData& pd, CoordLabel u, CoordLabel v, CoordLabel w,
                 CMethod method);

// Second derivatives of the two one-variable potentials and third derivatives
// of the mixed one (labels restricted to h and hhat).
Complex v1_hessian(const PointData& pd, int i1, int i2);
Complex v2_hessian(const PointData& pd, int j1, int j2);
Complex g_third(const PointData& pd, const CoordLabel& u, const CoordLabel& v,
                const CoordLabel& w);

// The double-contour log-kernel part of the potential; a diagnostic value,
// defined only modulo quadratic terms in the flat coordinates.
Complex potential_kernel(const PointData& pd, double outer_radius);
Complex kernel_double_integral(const LaurentSeries& zeta, const LaurentSeries& ell,
                               const CircleGrid& inner, double outer_radius);

// The intersection-form map g and its inverse.
TangentVec g_apply(const PointData& pd, const CotangentVec& w);
CotangentVec g_inverse(const PointData& pd, const TangentVec& v);

// Generating covectors da(p) and dahat(q), truncated at the given width.
CotangentVec da_covector(const PointMn& p, Complex at, int width = 40);
CotangentVec dahat_covector(const PointMn& p, Complex at, int width = 40);

}  // namespace frobwhit
