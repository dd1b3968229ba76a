#pragma once

#include <vector>

#include "frobwhit/series.hpp"

namespace frobwhit {

// Equispaced samples of the circle |z - center| = radius, oriented
// counterclockwise. The radius must exceed |center| so that z = 0 stays
// inside the contour.
struct CircleGrid {
  Complex center{0.0};
  double radius = 1.0;
  int n = 256;

  Complex node(int j) const {
    double th = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(n);
    return center + radius * Complex(std::cos(th), std::sin(th));
  }
  bool encloses_origin() const { return radius > std::abs(center); }
  friend bool operator==(const CircleGrid& a, const CircleGrid& b) = default;
};

struct SampledFunction {
  CircleGrid grid;
  std::vector<Complex> values;
};

// Pointwise evaluation of a phi-chart series on a grid centered at its base
// point.
SampledFunction samples_of(const LaurentSeries& f, const CircleGrid& grid);

// Coefficient recovery over the exponent range [lo, hi] by the discrete
// Fourier transform with the radius scaling r^{-k}; needs n >= 2 (hi-lo+1).
LaurentSeries series_from_samples(const SampledFunction& s, int lo, int hi);

// (1/2 pi i) of the contour integral of the sampled function.
Complex contour_integral(const SampledFunction& s);

// Winding number of the sampled curve around 0 by phase unwrapping.
int winding_number(const std::vector<Complex>& values);

// (1/2 pi i) of the integral of log(z / zeta(z)) dz with the branch chosen by
// phase unwrapping; requires zeta nonvanishing and z/zeta of winding zero.
Complex log_ratio_integral(const SampledFunction& zeta_samples);

// Pointwise helpers on aligned sample vectors.
SampledFunction sampled_mul(const SampledFunction& a, const SampledFunction& b);
SampledFunction sampled_div(const SampledFunction& a, const SampledFunction& b);

}  // namespace frobwhit
