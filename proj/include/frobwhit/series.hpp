#pragma once

#include <map>
#include <utility>

#include "frobwhit/util.hpp"

namespace frobwhit {

// Chart of a truncated Laurent series: powers of (z - phi) around the movable
// base point, or powers of z around infinity.
enum class Chart { kPhi, kInf };

// Trusted exponent range. Coefficients at exponents inside the window are
// exact for the finite representative the series stands for; a read outside
// the window throws WindowError. Sentinel values mark sides with no
// truncation at all.
inline constexpr int kExpInfLo = -(1 << 28);
inline constexpr int kExpInfHi = (1 << 28);

struct Window {
  int lo = kExpInfLo;
  int hi = kExpInfHi;

  static Window all() { return Window{}; }
  static Window range(int lo, int hi) { return Window{lo, hi}; }
  bool contains(int e) const { return lo <= e && e <= hi; }
  bool empty() const { return lo > hi; }
  friend bool operator==(const Window& a, const Window& b) = default;
};

inline int exp_clamp(long long v) {
  if (v <= kExpInfLo) return kExpInfLo;
  if (v >= kExpInfHi) return kExpInfHi;
  return static_cast<int>(v);
}

class LaurentSeries {
 public:
  using CoeffMap = std::map<int, Complex>;

  LaurentSeries() : chart_(Chart::kPhi), phi_(0.0) {}
  LaurentSeries(Chart chart, Complex phi, CoeffMap coeffs, Window window = Window::all());

  static LaurentSeries zero(Chart chart, Complex phi = 0.0, Window window = Window::all());
  static LaurentSeries constant(Chart chart, Complex phi, Complex value);
  static LaurentSeries monomial(Chart chart, Complex phi, int exponent, Complex value,
                                Window window = Window::all());

  Chart chart() const { return chart_; }
  Complex phi() const { return phi_; }
  const CoeffMap& coeffs() const { return coeffs_; }
  Window window() const { return window_; }

  bool is_zero() const { return coeffs_.empty(); }
  // Stored support bounds; only meaningful when not zero.
  int support_min() const;
  int support_max() const;

  // Coefficient at exponent e. Exponents outside the window throw; exponents
  // inside the window but off the stored support are exact zeros.
  Complex coeff(int e) const;

  // Re-stamps the window, dropping stored coefficients that fall outside.
  LaurentSeries with_window(Window w) const;

  double sup_abs() const;

 private:
  Chart chart_;
  Complex phi_;
  CoeffMap coeffs_;
  Window window_;
};

// ---- arithmetic -----------------------------------------------------------

LaurentSeries operator+(const LaurentSeries& f, const LaurentSeries& g);
LaurentSeries operator-(const LaurentSeries& f, const LaurentSeries& g);
LaurentSeries operator*(const LaurentSeries& f, const LaurentSeries& g);
LaurentSeries operator*(Complex s, const LaurentSeries& f);
LaurentSeries operator*(const LaurentSeries& f, Complex s);
LaurentSeries operator-(const LaurentSeries& f);

// d/dz in either chart (acts on the chart's power basis).
LaurentSeries derivative(const LaurentSeries& f);

// Multiplication by the k-th power of the chart monomial (z-phi)^k resp. z^k.
LaurentSeries shifted(const LaurentSeries& f, int k);

// Exponent-range truncations; work in both charts and keep the window logic
// described above (the discarded side becomes fully trusted zero).
LaurentSeries truncate_ge(const LaurentSeries& f, int k);
LaurentSeries truncate_le(const LaurentSeries& f, int k);

enum class Projection { kPlus, kMinus };

// Nonnegative / negative power part of a phi-chart series.
LaurentSeries project(const LaurentSeries& f, Projection sel);
LaurentSeries project_ge(const LaurentSeries& f, int k);
LaurentSeries project_le(const LaurentSeries& f, int k);

// ---- residues and chart changes ------------------------------------------

// Coefficient of (z-phi)^{-1}; requires the phi chart.
Complex residue_phi(const LaurentSeries& f);

// res_{z=inf} f dz = -[z^{-1}] f. Accepts either chart; a phi-chart input is
// folded through the exact binomial re-expansion of its stored support.
Complex residue_infinity(const LaurentSeries& f);

// Re-expansion of a phi-chart series at infinity, keeping z-exponents
// >= -depth. The input must carry no upper truncation.
LaurentSeries reexpand_infinity(const LaurentSeries& f, int depth);

// Re-expansion of an inf-chart series in the (z-phi) chart, keeping
// exponents >= lo_out. Valid on the annulus |z-phi| > |phi|.
LaurentSeries reexpand_phi(const LaurentSeries& f, Complex phi, int lo_out);

// ---- single-tail formal division -----------------------------------------

// Quotient f/g developed in descending exponents from the top of g
// (behaviour at infinity), keeping `depth` orders.
LaurentSeries div_at_infinity(const LaurentSeries& f, const LaurentSeries& g, int depth);

// Quotient f/g developed in ascending exponents from the bottom of g
// (behaviour at the base point), keeping `depth` orders.
LaurentSeries div_at_phi(const LaurentSeries& f, const LaurentSeries& g, int depth);

// ---- fractional powers and reversion --------------------------------------

// f^{num/den} with the principal branch of the leading coefficient's root.
// The development direction follows the chart: descending for kInf,
// ascending for kPhi. depth < 0 picks the depth supported by f's window
// (capped by kDefaultDepth when the window is untruncated).
inline constexpr int kDefaultDepth = 33;
LaurentSeries power_rational(const LaurentSeries& f, int num, int den, int depth = -1);

// Compositional inverse for the graded cases: an inf-chart series with
// leading exponent +1 (near-identity at infinity), a phi-chart series with
// leading exponent -1 (near-simple-pole; the inverse is an expansion at
// infinity in the new variable, constant term = base point), or a phi-chart
// series with ascending support and leading exponent +1.
LaurentSeries revert(const LaurentSeries& f, int depth = 24);

// ---- evaluation and comparison helpers ------------------------------------

Complex evaluate(const LaurentSeries& f, Complex z);

// Max coefficient difference over [lo, hi] (exponents untrusted on either
// side throw).
double max_abs_diff(const LaurentSeries& f, const LaurentSeries& g, int lo, int hi);

// Max coefficient difference over the union of stored supports, clipped to
// the intersection of the two windows.
double max_abs_diff(const LaurentSeries& f, const LaurentSeries& g);

}  // namespace frobwhit
