#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace frobwhit {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline const Complex kImagUnit{0.0, 1.0};

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Two series in different charts (or with different base points) were mixed.
struct ChartError : Error {
  using Error::Error;
};

// A coefficient outside the trusted exponent window was requested.
struct WindowError : Error {
  using Error::Error;
};

// A precondition on the inputs does not hold (zero leading coefficient,
// bad exponent shape, invalid label range, ...).
struct DomainError : Error {
  using Error::Error;
};

// An iterative solve stopped above its defect tolerance.
struct ConvergenceError : Error {
  double residual;
  ConvergenceError(const std::string& what, double r) : Error(what), residual(r) {}
};

// Deterministic generator; identical seeds give identical draws for one
// binary, independent of libstdc++ distribution internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

  std::uint64_t next_u64() {
    // splitmix64
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // Uniform on the closed disc of the given radius.
  Complex disc(double radius) {
    double r = radius * std::sqrt(uniform());
    double th = 2.0 * kPi * uniform();
    return Complex(r * std::cos(th), r * std::sin(th));
  }

  // Uniform modulus in [r_inner, r_outer], uniform phase.
  Complex annulus(double r_inner, double r_outer) {
    double r = uniform(r_inner, r_outer);
    double th = 2.0 * kPi * uniform();
    return Complex(r * std::cos(th), r * std::sin(th));
  }

  int uniform_int(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
  }

 private:
  std::uint64_t state_;
};

}  // namespace frobwhit
