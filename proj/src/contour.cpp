#include "frobwhit/contour.hpp"

#include <cmath>

namespace frobwhit {

namespace {

std::vector<Complex> roots_of_unity(int n) {
  std::vector<Complex> w(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    double th = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(n);
    w[static_cast<std::size_t>(j)] = Complex(std::cos(th), std::sin(th));
  }
  return w;
}

}  // namespace

SampledFunction samples_of(const LaurentSeries& f, const CircleGrid& grid) {
  if (f.chart() != Chart::kPhi) throw ChartError("samples_of: needs the phi chart");
  if (f.phi() != grid.center) throw ChartError("samples_of: grid center differs from base point");
  auto w = roots_of_unity(grid.n);
  SampledFunction out;
  out.grid = grid;
  out.values.assign(static_cast<std::size_t>(grid.n), Complex(0.0));
  for (const auto& [e, c] : f.coeffs()) {
    double re = std::pow(grid.radius, static_cast<double>(e));
    for (int j = 0; j < grid.n; ++j) {
      // (z_j - center)^e = r^e w^{je}
      long long idx = (static_cast<long long>(j) * e) % grid.n;
      if (idx < 0) idx += grid.n;
      out.values[static_cast<std::size_t>(j)] += c * re * w[static_cast<std::size_t>(idx)];
    }
  }
  return out;
}

LaurentSeries series_from_samples(const SampledFunction& s, int lo, int hi) {
  const int n = s.grid.n;
  if (hi < lo) throw DomainError("series_from_samples: empty window");
  if (n < 2 * (hi - lo + 1))
    throw DomainError("series_from_samples: grid too coarse for the requested window");
  auto w = roots_of_unity(n);
  LaurentSeries::CoeffMap out;
  for (int e = lo; e <= hi; ++e) {
    Complex acc = 0.0;
    for (int j = 0; j < n; ++j) {
      long long idx = (-static_cast<long long>(j) * e) % n;
      if (idx < 0) idx += n;
      acc += s.values[static_cast<std::size_t>(j)] * w[static_cast<std::size_t>(idx)];
    }
    out[e] = acc / (static_cast<double>(n) * std::pow(s.grid.radius, static_cast<double>(e)));
  }
  // the recovered polynomial is the finite representative computed with from
  // here on; its tail beyond the window is zero by construction
  return LaurentSeries(Chart::kPhi, s.grid.center, std::move(out), Window::all());
}

Complex contour_integral(const SampledFunction& s) {
  const int n = s.grid.n;
  auto w = roots_of_unity(n);
  Complex acc = 0.0;
  for (int j = 0; j < n; ++j) acc += s.values[static_cast<std::size_t>(j)] * w[static_cast<std::size_t>(j)];
  return acc * (s.grid.radius / static_cast<double>(n));
}

int winding_number(const std::vector<Complex>& values) {
  const std::size_t n = values.size();
  if (n == 0) throw DomainError("winding_number: no samples");
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    Complex a = values[j];
    Complex b = values[(j + 1) % n];
    if (std::abs(a) == 0.0 || std::abs(b) == 0.0)
      throw DomainError("winding_number: sample at the origin");
    total += std::arg(b / a);
  }
  return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

Complex log_ratio_integral(const SampledFunction& zeta_samples) {
  const CircleGrid& grid = zeta_samples.grid;
  const int n = grid.n;
  std::vector<Complex> ratio(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    Complex zj = grid.node(j);
    Complex zeta = zeta_samples.values[static_cast<std::size_t>(j)];
    if (std::abs(zeta) == 0.0) throw DomainError("log_ratio_integral: zeta vanishes on the grid");
    ratio[static_cast<std::size_t>(j)] = zj / zeta;
  }
  if (winding_number(ratio) != 0)
    throw DomainError("log_ratio_integral: z/zeta winds around the origin");
  // unwrapped branch of log along the loop
  SampledFunction logs;
  logs.grid = grid;
  logs.values.assign(static_cast<std::size_t>(n), Complex(0.0));
  double phase = std::arg(ratio[0]);
  logs.values[0] = Complex(std::log(std::abs(ratio[0])), phase);
  for (int j = 1; j < n; ++j) {
    phase += std::arg(ratio[static_cast<std::size_t>(j)] / ratio[static_cast<std::size_t>(j - 1)]);
    logs.values[static_cast<std::size_t>(j)] =
        Complex(std::log(std::abs(ratio[static_cast<std::size_t>(j)])), phase);
  }
  return contour_integral(logs);
}

SampledFunction sampled_mul(const SampledFunction& a, const SampledFunction& b) {
  if (!(a.grid == b.grid)) throw ChartError("sampled_mul: grids differ");
  SampledFunction out = a;
  for (std::size_t j = 0; j < out.values.size(); ++j) out.values[j] *= b.values[j];
  return out;
}

SampledFunction sampled_div(const SampledFunction& a, const SampledFunction& b) {
  if (!(a.grid == b.grid)) throw ChartError("sampled_div: grids differ");
  SampledFunction out = a;
  for (std::size_t j = 0; j < out.values.size(); ++j) {
    if (std::abs(b.values[j]) == 0.0) throw DomainError("sampled_div: zero denominator sample");
    out.values[j] /= b.values[j];
  }
  return out;
}

}  // namespace frobwhit
