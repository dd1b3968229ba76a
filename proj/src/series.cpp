#include "frobwhit/series.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace frobwhit {

namespace {

constexpr double kZeroDropTol = 0.0;  // only exact zeros are dropped

bool same_frame(const LaurentSeries& f, const LaurentSeries& g) {
  if (f.chart() != g.chart()) return false;
  if (f.chart() == Chart::kPhi && f.phi() != g.phi()) return false;
  return true;
}

void require_same_frame(const LaurentSeries& f, const LaurentSeries& g, const char* op) {
  if (!same_frame(f, g))
    throw ChartError(std::string(op) + ": operands live in different charts");
}

// First argument is a window bound; the infinite sentinels are sticky.
int sat_add(int a, int b) {
  if (a <= kExpInfLo) return kExpInfLo;
  if (a >= kExpInfHi) return kExpInfHi;
  return exp_clamp(static_cast<long long>(a) + b);
}

// Lowest exponent that can carry a nonzero or unknown coefficient.
int reach_lo(const LaurentSeries& f) {
  if (f.window().lo > kExpInfLo) return f.window().lo;
  return f.is_zero() ? 0 : f.support_min();
}

int reach_hi(const LaurentSeries& f) {
  if (f.window().hi < kExpInfHi) return f.window().hi;
  return f.is_zero() ? 0 : f.support_max();
}

Window mul_window(const LaurentSeries& f, const LaurentSeries& g) {
  Window w;
  w.hi = kExpInfHi;
  if (f.window().hi < kExpInfHi) w.hi = std::min(w.hi, sat_add(f.window().hi, reach_lo(g)));
  if (g.window().hi < kExpInfHi) w.hi = std::min(w.hi, sat_add(g.window().hi, reach_lo(f)));
  w.lo = kExpInfLo;
  if (f.window().lo > kExpInfLo) w.lo = std::max(w.lo, sat_add(f.window().lo, reach_hi(g)));
  if (g.window().lo > kExpInfLo) w.lo = std::max(w.lo, sat_add(g.window().lo, reach_hi(f)));
  return w;
}

}  // namespace

LaurentSeries::LaurentSeries(Chart chart, Complex phi, CoeffMap coeffs, Window window)
    : chart_(chart), phi_(chart == Chart::kPhi ? phi : Complex(0.0)), window_(window) {
  for (auto& [e, c] : coeffs) {
    if (!window_.contains(e)) continue;
    if (std::abs(c) == kZeroDropTol) continue;
    coeffs_.emplace(e, c);
  }
}

LaurentSeries LaurentSeries::zero(Chart chart, Complex phi, Window window) {
  return LaurentSeries(chart, phi, {}, window);
}

LaurentSeries LaurentSeries::constant(Chart chart, Complex phi, Complex value) {
  return LaurentSeries(chart, phi, {{0, value}});
}

LaurentSeries LaurentSeries::monomial(Chart chart, Complex phi, int exponent, Complex value,
                                      Window window) {
  return LaurentSeries(chart, phi, {{exponent, value}}, window);
}

int LaurentSeries::support_min() const {
  if (coeffs_.empty()) throw DomainError("support_min of zero series");
  return coeffs_.begin()->first;
}

int LaurentSeries::support_max() const {
  if (coeffs_.empty()) throw DomainError("support_max of zero series");
  return coeffs_.rbegin()->first;
}

Complex LaurentSeries::coeff(int e) const {
  if (!window_.contains(e))
    throw WindowError("coefficient at exponent " + std::to_string(e) +
                      " lies outside the trusted window [" + std::to_string(window_.lo) + "," +
                      std::to_string(window_.hi) + "]");
  auto it = coeffs_.find(e);
  return it == coeffs_.end() ? Complex(0.0) : it->second;
}

LaurentSeries LaurentSeries::with_window(Window w) const {
  return LaurentSeries(chart_, phi_, coeffs_, w);
}

double LaurentSeries::sup_abs() const {
  double s = 0.0;
  for (const auto& [e, c] : coeffs_) s = std::max(s, std::abs(c));
  return s;
}

// ---- arithmetic -----------------------------------------------------------

LaurentSeries operator+(const LaurentSeries& f, const LaurentSeries& g) {
  require_same_frame(f, g, "add");
  Window w{std::max(f.window().lo, g.window().lo), std::min(f.window().hi, g.window().hi)};
  LaurentSeries::CoeffMap out = f.coeffs();
  for (const auto& [e, c] : g.coeffs()) out[e] += c;
  return LaurentSeries(f.chart(), f.phi(), std::move(out), w);
}

LaurentSeries operator-(const LaurentSeries& f, const LaurentSeries& g) { return f + (-g); }

LaurentSeries operator-(const LaurentSeries& f) {
  LaurentSeries::CoeffMap out;
  for (const auto& [e, c] : f.coeffs()) out[e] = -c;
  return LaurentSeries(f.chart(), f.phi(), std::move(out), f.window());
}

LaurentSeries operator*(const LaurentSeries& f, const LaurentSeries& g) {
  require_same_frame(f, g, "mul");
  Window w = mul_window(f, g);
  LaurentSeries::CoeffMap out;
  if (!f.is_zero() && !g.is_zero()) {
    for (const auto& [ef, cf] : f.coeffs())
      for (const auto& [eg, cg] : g.coeffs()) {
        long long e = static_cast<long long>(ef) + eg;
        if (e < w.lo || e > w.hi) continue;
        out[static_cast<int>(e)] += cf * cg;
      }
  }
  return LaurentSeries(f.chart(), f.phi(), std::move(out), w);
}

LaurentSeries operator*(Complex s, const LaurentSeries& f) {
  LaurentSeries::CoeffMap out;
  for (const auto& [e, c] : f.coeffs()) out[e] = s * c;
  return LaurentSeries(f.chart(), f.phi(), std::move(out), f.window());
}

LaurentSeries operator*(const LaurentSeries& f, Complex s) { return s * f; }

LaurentSeries derivative(const LaurentSeries& f) {
  LaurentSeries::CoeffMap out;
  for (const auto& [e, c] : f.coeffs())
    if (e != 0) out[e - 1] = static_cast<double>(e) * c;
  Window w{sat_add(f.window().lo, -1), sat_add(f.window().hi, -1)};
  return LaurentSeries(f.chart(), f.phi(), std::move(out), w);
}

LaurentSeries shifted(const LaurentSeries& f, int k) {
  LaurentSeries::CoeffMap out;
  for (const auto& [e, c] : f.coeffs()) out[e + k] = c;
  Window w{sat_add(f.window().lo, k), sat_add(f.window().hi, k)};
  return LaurentSeries(f.chart(), f.phi(), std::move(out), w);
}

LaurentSeries truncate_ge(const LaurentSeries& f, int k) {
  Window w = (k >= f.window().lo) ? Window{kExpInfLo, f.window().hi} : f.window();
  LaurentSeries::CoeffMap out;
  for (const auto& [e, c] : f.coeffs())
    if (e >= k) out[e] = c;
  return LaurentSeries(f.chart(), f.phi(), std::move(out), w);
}

LaurentSeries truncate_le(const LaurentSeries& f, int k) {
  Window w = (k <= f.window().hi) ? Window{f.window().lo, kExpInfHi} : f.window();
  LaurentSeries::CoeffMap out;
  for (const auto& [e, c] : f.coeffs())
    if (e <= k) out[e] = c;
  return LaurentSeries(f.chart(), f.phi(), std::move(out), w);
}

static void require_phi_chart(const LaurentSeries& f, const char* op) {
  if (f.chart() != Chart::kPhi) throw ChartError(std::string(op) + ": needs the phi chart");
}

LaurentSeries project(const LaurentSeries& f, Projection sel) {
  require_phi_chart(f, "project");
  return sel == Projection::kPlus ? truncate_ge(f, 0) : truncate_le(f, -1);
}

LaurentSeries project_ge(const LaurentSeries& f, int k) {
  require_phi_chart(f, "project_ge");
  return truncate_ge(f, k);
}

LaurentSeries project_le(const LaurentSeries& f, int k) {
  require_phi_chart(f, "project_le");
  return truncate_le(f, k);
}

// ---- residues and chart changes ------------------------------------------

Complex residue_phi(const LaurentSeries& f) {
  require_phi_chart(f, "residue_phi");
  return f.coeff(-1);
}

LaurentSeries reexpand_infinity(const LaurentSeries& f, int depth) {
  require_phi_chart(f, "reexpand_infinity");
  if (f.window().hi < kExpInfHi)
    throw WindowError("reexpand_infinity: input carries an upper truncation");
  const Complex phi = f.phi();
  LaurentSeries::CoeffMap out;
  for (const auto& [i, c] : f.coeffs()) {
    if (i >= 0) {
      // (z-phi)^i = sum_k C(i,k) (-phi)^k z^{i-k}
      Complex term = c;
      for (int k = 0; k <= i; ++k) {
        out[i - k] += term;
        term *= -phi * static_cast<double>(i - k) / static_cast<double>(k + 1);
      }
    } else {
      // (z-phi)^i = z^i sum_j C(-i-1+j, j) (phi/z)^j, valid for |z| > |phi|
      Complex term = c;
      for (int j = 0; i - j >= -depth; ++j) {
        out[i - j] += term;
        term *= phi * static_cast<double>(-i + j) / static_cast<double>(j + 1);
      }
    }
  }
  int lo = -depth;
  if (f.window().lo > kExpInfLo) lo = std::max(lo, f.window().lo);
  // a pure polynomial part re-expands exactly
  if (f.window().lo == kExpInfLo && (f.is_zero() || f.support_min() >= 0)) lo = kExpInfLo;
  return LaurentSeries(Chart::kInf, 0.0, std::move(out), Window{lo, kExpInfHi});
}

LaurentSeries reexpand_phi(const LaurentSeries& f, Complex phi, int lo_out) {
  if (f.chart() != Chart::kInf) throw ChartError("reexpand_phi: needs the inf chart");
  if (f.window().hi < kExpInfHi)
    throw WindowError("reexpand_phi: input carries an upper truncation");
  LaurentSeries::CoeffMap out;
  for (const auto& [i, c] : f.coeffs()) {
    if (i >= 0) {
      // z^i = sum_k C(i,k) phi^{i-k} (z-phi)^k
      if (phi == Complex(0.0)) {
        out[i] += c;
        continue;
      }
      Complex term = c * std::pow(phi, static_cast<double>(i));
      for (int k = 0; k <= i; ++k) {
        out[k] += term;
        term *= static_cast<double>(i - k) / (static_cast<double>(k + 1) * phi);
      }
    } else {
      // z^i = sum_j C(-i-1+j, j) (-phi)^j (z-phi)^{i-j}, valid |z-phi| > |phi|
      Complex term = c;
      for (int j = 0; i - j >= lo_out; ++j) {
        out[i - j] += term;
        term *= -phi * static_cast<double>(-i + j) / static_cast<double>(j + 1);
      }
    }
  }
  int lo = lo_out;
  if (f.window().lo > kExpInfLo) lo = std::max(lo, f.window().lo);
  if (f.window().lo == kExpInfLo && (f.is_zero() || f.support_min() >= 0)) lo = kExpInfLo;
  return LaurentSeries(Chart::kPhi, phi, std::move(out), Window{lo, kExpInfHi});
}

Complex residue_infinity(const LaurentSeries& f) {
  if (f.chart() == Chart::kInf) return -f.coeff(-1);
  // a phi-chart representative is rational with its only finite pole at phi
  LaurentSeries at_inf = reexpand_infinity(f, 2);
  return -at_inf.coeff(-1);
}

// ---- single-tail formal division -----------------------------------------

namespace {

struct Tail {
  int lead = 0;        // exponent of index 0
  int dir = -1;        // -1: descending (at infinity), +1: ascending (at phi)
  std::vector<Complex> c;
};

// Relative-order view of a series from its pivot side; unknown orders beyond
// `depth` are cut. Requires full trust on the pivot side.
Tail to_tail(const LaurentSeries& f, int dir, int depth, const char* op) {
  if (f.is_zero()) throw DomainError(std::string(op) + ": zero series");
  Tail t;
  t.dir = dir;
  t.lead = dir < 0 ? f.support_max() : f.support_min();
  if (dir < 0 && f.window().hi < kExpInfHi)
    throw WindowError(std::string(op) + ": upper truncation hides the pivot at infinity");
  if (dir > 0 && f.window().lo > kExpInfLo)
    throw WindowError(std::string(op) + ": lower truncation hides the pivot at the base point");
  int avail = depth;
  if (dir < 0 && f.window().lo > kExpInfLo) avail = std::min(avail, t.lead - f.window().lo + 1);
  if (dir > 0 && f.window().hi < kExpInfHi) avail = std::min(avail, f.window().hi - t.lead + 1);
  if (avail < 1) throw WindowError(std::string(op) + ": window too narrow for requested depth");
  t.c.assign(static_cast<std::size_t>(avail), Complex(0.0));
  for (const auto& [e, v] : f.coeffs()) {
    int d = dir * (e - t.lead);
    if (d >= 0 && d < avail) t.c[static_cast<std::size_t>(d)] = v;
  }
  return t;
}

LaurentSeries from_tail(const Tail& t, Chart chart, Complex phi) {
  LaurentSeries::CoeffMap out;
  for (std::size_t d = 0; d < t.c.size(); ++d)
    out[t.lead + t.dir * static_cast<int>(d)] = t.c[d];
  Window w;
  int last = t.lead + t.dir * (static_cast<int>(t.c.size()) - 1);
  if (t.dir < 0) {
    w = Window{last, kExpInfHi};
  } else {
    w = Window{kExpInfLo, last};
  }
  return LaurentSeries(chart, phi, std::move(out), w);
}

std::vector<Complex> conv_trunc(const std::vector<Complex>& a, const std::vector<Complex>& b,
                                std::size_t n) {
  std::vector<Complex> out(n, Complex(0.0));
  for (std::size_t i = 0; i < a.size() && i < n; ++i) {
    if (a[i] == Complex(0.0)) continue;
    for (std::size_t j = 0; j < b.size() && i + j < n; ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

// (c[0] + c[1] X + ...)^{-1} truncated; c[0] must be nonzero.
std::vector<Complex> inv_trunc(const std::vector<Complex>& c, std::size_t n, const char* op) {
  if (c.empty() || c[0] == Complex(0.0))
    throw DomainError(std::string(op) + ": zero leading coefficient");
  std::vector<Complex> out(n, Complex(0.0));
  out[0] = 1.0 / c[0];
  for (std::size_t d = 1; d < n; ++d) {
    Complex s = 0.0;
    for (std::size_t k = 1; k <= d && k < c.size(); ++k) s += c[k] * out[d - k];
    out[d] = -s / c[0];
  }
  return out;
}

std::vector<Complex> pow_trunc(std::vector<Complex> base, int p, std::size_t n) {
  std::vector<Complex> out(n, Complex(0.0));
  out[0] = 1.0;
  while (p > 0) {
    if (p & 1) out = conv_trunc(out, base, n);
    base = conv_trunc(base, base, n);
    p >>= 1;
  }
  return out;
}

double sup_abs(const std::vector<Complex>& v) {
  double s = 0.0;
  for (const auto& x : v) s = std::max(s, std::abs(x));
  return s;
}

}  // namespace

static LaurentSeries div_tail(const LaurentSeries& f, const LaurentSeries& g, int depth, int dir,
                              const char* op) {
  require_same_frame(f, g, op);
  if (f.is_zero()) return LaurentSeries::zero(f.chart(), f.phi());
  Tail gt = to_tail(g, dir, depth, op);
  Tail ft = to_tail(f, dir, depth, op);
  std::size_t n = std::min(ft.c.size(), gt.c.size());
  std::vector<Complex> ginv = inv_trunc(gt.c, n, op);
  Tail q;
  q.dir = dir;
  q.lead = ft.lead - gt.lead;
  q.c = conv_trunc(ft.c, ginv, n);
  return from_tail(q, f.chart(), f.phi());
}

LaurentSeries div_at_infinity(const LaurentSeries& f, const LaurentSeries& g, int depth) {
  return div_tail(f, g, depth, -1, "div_at_infinity");
}

LaurentSeries div_at_phi(const LaurentSeries& f, const LaurentSeries& g, int depth) {
  return div_tail(f, g, depth, +1, "div_at_phi");
}

// ---- fractional powers -----------------------------------------------------

LaurentSeries power_rational(const LaurentSeries& f, int num, int den, int depth) {
  if (den <= 0) throw DomainError("power_rational: denominator must be positive");
  if (f.is_zero()) {
    if (num > 0) return LaurentSeries::zero(f.chart(), f.phi());
    throw DomainError("power_rational: zero series to a nonpositive power");
  }
  int g = std::gcd(std::abs(num), den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  const int dir = f.chart() == Chart::kInf ? -1 : +1;
  if (depth < 0) depth = kDefaultDepth;
  Tail ft = to_tail(f, dir, depth, "power_rational");
  if (ft.c[0] == Complex(0.0)) throw DomainError("power_rational: zero leading coefficient");
  if ((static_cast<long long>(ft.lead) * num) % den != 0)
    throw DomainError("power_rational: leading exponent not divisible by the root order");
  const std::size_t n = ft.c.size();
  const Complex c0 = ft.c[0];
  // normalized tail u with u[0] = 1
  std::vector<Complex> u(ft.c);
  for (auto& x : u) x /= c0;

  // Newton for r = u^{1/den}: r <- ((den-1) r + u r^{1-den}) / den,
  // starting from the exact root of the leading term; correct orders double
  // each step. The defect r^den - u is judged order by order against the
  // rounding floor of the convolutions that produced it, so the shallow
  // orders are held to 1e-13 even when deep tail coefficients grow.
  std::vector<Complex> r(n, Complex(0.0));
  r[0] = 1.0;
  auto defect_ok = [&](const std::vector<Complex>& rp) {
    double prefix = 1.0;
    for (std::size_t d = 0; d < n; ++d) {
      prefix = std::max(prefix, std::abs(r[d]));
      double scale = std::max(1.0, prefix * prefix * static_cast<double>(d + 1));
      if (std::abs(rp[d]) > 1e-13 * scale) return false;
    }
    return true;
  };
  bool converged = false;
  double last_defect = 0.0;
  for (int it = 0; it < 64 && !converged; ++it) {
    if (den == 1) r = u;
    std::vector<Complex> rp = pow_trunc(r, den, n);
    for (std::size_t i = 0; i < n; ++i) rp[i] -= u[i];
    last_defect = sup_abs(rp);
    if (defect_ok(rp)) {
      converged = true;
      break;
    }
    std::vector<Complex> rinv = inv_trunc(r, n, "power_rational");
    std::vector<Complex> corr = conv_trunc(rp, pow_trunc(rinv, den - 1, n), n);
    for (std::size_t i = 0; i < n; ++i) r[i] -= corr[i] / static_cast<double>(den);
  }
  if (!converged)
    throw ConvergenceError("power_rational: root iteration did not reach tolerance", last_defect);

  std::vector<Complex> result;
  if (num >= 0) {
    result = pow_trunc(r, num, n);
  } else {
    result = pow_trunc(inv_trunc(r, n, "power_rational"), -num, n);
  }
  const Complex scale = std::pow(c0, static_cast<double>(num) / static_cast<double>(den));
  for (auto& x : result) x *= scale;

  Tail out;
  out.dir = dir;
  out.lead = static_cast<int>(static_cast<long long>(ft.lead) * num / den);
  out.c = std::move(result);
  return from_tail(out, f.chart(), f.phi());
}

// ---- reversion -------------------------------------------------------------

namespace {

// sum over f's stored support of f_k * g^k, negative k through the formal
// inverse of g taken from the descending (case A/B) or ascending (case C)
// side.
LaurentSeries compose_with(const LaurentSeries& f, const LaurentSeries& g, int depth, int dir) {
  LaurentSeries acc = LaurentSeries::zero(g.chart(), g.phi());
  LaurentSeries one = LaurentSeries::constant(g.chart(), g.phi(), 1.0);
  LaurentSeries ginv = LaurentSeries::zero(g.chart(), g.phi());
  bool have_inv = false;
  for (const auto& [k, c] : f.coeffs()) {
    LaurentSeries pk = one;
    if (k >= 0) {
      for (int i = 0; i < k; ++i) pk = pk * g;
    } else {
      if (!have_inv) {
        ginv = dir < 0 ? div_at_infinity(one, g, depth) : div_at_phi(one, g, depth);
        have_inv = true;
      }
      for (int i = 0; i < -k; ++i) pk = pk * ginv;
    }
    acc = acc + c * pk;
  }
  return acc;
}

}  // namespace

LaurentSeries revert(const LaurentSeries& f, int depth) {
  if (f.is_zero()) throw DomainError("revert: zero series");
  const double scale = std::max(1.0, f.sup_abs());

  if (f.chart() == Chart::kInf) {
    // case A: f = c1 z + c0 + c_{-1} z^{-1} + ..., inverse of the same shape
    if (f.support_max() != 1 || f.coeff(1) == Complex(0.0))
      throw DomainError("revert: leading exponent at infinity must be +1");
    const Complex c1 = f.coeff(1);
    LaurentSeries w = LaurentSeries::monomial(Chart::kInf, 0.0, 1, 1.0);
    LaurentSeries g = (1.0 / c1) * (w - LaurentSeries::constant(Chart::kInf, 0.0, f.coeff(0)));
    g = g.with_window(Window{1 - depth, kExpInfHi});
    double res = 0.0;
    for (int it = 0; it < depth + 8; ++it) {
      LaurentSeries err = compose_with(f, g, depth, -1) - w;
      res = err.sup_abs();
      if (res < 1e-13 * scale) break;
      g = g - (1.0 / c1) * err;
    }
    if (res >= 1e-12 * scale)
      throw ConvergenceError("revert: iteration stalled", res);
    return g;
  }

  // phi chart
  if (f.support_min() == -1 && f.coeff(-1) != Complex(0.0)) {
    // case B: f = b (z-phi)^{-1} + c0 + ..., inverse = phi + b u^{-1} + ...
    const Complex b = f.coeff(-1);
    LaurentSeries w = LaurentSeries::monomial(Chart::kInf, 0.0, 1, 1.0);
    LaurentSeries g = LaurentSeries::monomial(Chart::kInf, 0.0, -1, b);
    g = g.with_window(Window{-depth, kExpInfHi});
    LaurentSeries f_reg = truncate_ge(f, 0);  // nonnegative part, composed with g
    double res = 0.0;
    for (int it = 0; it < depth + 8; ++it) {
      LaurentSeries s = f_reg.is_zero() ? LaurentSeries::zero(Chart::kInf, 0.0)
                                        : compose_with(f_reg, g, depth, -1);
      LaurentSeries g_next = b * div_at_infinity(LaurentSeries::constant(Chart::kInf, 0.0, 1.0),
                                                 w - s, depth);
      res = (g_next - g).sup_abs();
      g = g_next;
      if (res < 1e-13 * scale) break;
    }
    LaurentSeries err = compose_with(f, g, depth, -1) - w;
    if (err.sup_abs() >= 1e-12 * scale)
      throw ConvergenceError("revert: iteration stalled", err.sup_abs());
    return g + LaurentSeries::constant(Chart::kInf, 0.0, f.phi());
  }

  if (f.support_min() >= 0 && f.coeff(1) != Complex(0.0)) {
    // case C: ordinary reversion of an ascending series with simple zero
    const Complex c1 = f.coeff(1);
    LaurentSeries w = LaurentSeries::monomial(Chart::kPhi, 0.0, 1, 1.0);
    LaurentSeries g = (1.0 / c1) * (w - LaurentSeries::constant(Chart::kPhi, 0.0, f.coeff(0)));
    g = g.with_window(Window{kExpInfLo, depth});
    double res = 0.0;
    for (int it = 0; it < depth + 8; ++it) {
      LaurentSeries err = compose_with(f, g, depth, +1) - w;
      res = err.sup_abs();
      if (res < 1e-13 * scale) break;
      g = g - (1.0 / c1) * err;
    }
    if (res >= 1e-12 * scale)
      throw ConvergenceError("revert: iteration stalled", res);
    return g;
  }

  throw DomainError("revert: leading exponent must be +1 or -1");
}

// ---- evaluation ------------------------------------------------------------

Complex evaluate(const LaurentSeries& f, Complex z) {
  const Complex base = f.chart() == Chart::kPhi ? z - f.phi() : z;
  Complex acc = 0.0;
  for (const auto& [e, c] : f.coeffs())
    acc += c * std::pow(base, static_cast<double>(e));
  return acc;
}

double max_abs_diff(const LaurentSeries& f, const LaurentSeries& g, int lo, int hi) {
  double s = 0.0;
  for (int e = lo; e <= hi; ++e) s = std::max(s, std::abs(f.coeff(e) - g.coeff(e)));
  return s;
}

double max_abs_diff(const LaurentSeries& f, const LaurentSeries& g) {
  int lo = std::max(f.window().lo, g.window().lo);
  int hi = std::min(f.window().hi, g.window().hi);
  double s = 0.0;
  auto scan = [&](const LaurentSeries& a) {
    for (const auto& [e, c] : a.coeffs())
      if (e >= lo && e <= hi) s = std::max(s, std::abs(f.coeff(e) - g.coeff(e)));
  };
  scan(f);
  scan(g);
  return s;
}

}  // namespace frobwhit
