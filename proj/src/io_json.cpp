#include "frobwhit/io_json.hpp"

namespace frobwhit {

Json to_json(const Complex& c) { return Json::array({c.real(), c.imag()}); }

Complex complex_from_json(const Json& j) {
  return Complex(j.at(0).get<double>(), j.at(1).get<double>());
}

Json to_json(const LaurentSeries& f) {
  Json j;
  j["chart"] = f.chart() == Chart::kPhi ? "phi" : "inf";
  j["phi"] = to_json(f.phi());
  j["window"] = Json::array({f.window().lo, f.window().hi});
  Json coeffs = Json::object();
  for (const auto& [e, c] : f.coeffs()) coeffs[std::to_string(e)] = to_json(c);
  j["coeffs"] = std::move(coeffs);
  return j;
}

LaurentSeries series_from_json(const Json& j) {
  Chart chart = j.at("chart").get<std::string>() == "phi" ? Chart::kPhi : Chart::kInf;
  Complex phi = complex_from_json(j.at("phi"));
  Window w{j.at("window").at(0).get<int>(), j.at("window").at(1).get<int>()};
  if (w.lo <= -(1 << 28)) w.lo = kExpInfLo;
  if (w.hi >= (1 << 28)) w.hi = kExpInfHi;
  LaurentSeries::CoeffMap coeffs;
  for (const auto& [key, val] : j.at("coeffs").items())
    coeffs[std::stoi(key)] = complex_from_json(val);
  return LaurentSeries(chart, phi, std::move(coeffs), w);
}

Json to_json(const CircleGrid& g) {
  Json j;
  j["center"] = to_json(g.center);
  j["radius"] = g.radius;
  j["N"] = g.n;
  return j;
}

CircleGrid grid_from_json(const Json& j) {
  return CircleGrid{complex_from_json(j.at("center")), j.at("radius").get<double>(),
                    j.at("N").get<int>()};
}

Json to_json(const PointMn& p) {
  Json j;
  j["m"] = p.m;
  j["n"] = p.n;
  j["phi"] = to_json(p.phi);
  Json ell = Json::object();
  for (const auto& [e, c] : p.ell.coeffs()) ell[std::to_string(e)] = to_json(c);
  j["ell"] = std::move(ell);
  j["zeta"] = to_json(p.zeta);
  return j;
}

PointMn point_from_json(const Json& j) {
  int m = j.at("m").get<int>();
  int n = j.at("n").get<int>();
  Complex phi = complex_from_json(j.at("phi"));
  LaurentSeries::CoeffMap ell;
  for (const auto& [key, val] : j.at("ell").items())
    ell[std::stoi(key)] = complex_from_json(val);
  LaurentSeries zeta = series_from_json(j.at("zeta"));
  return make_point(m, n, phi, LaurentSeries(Chart::kPhi, phi, std::move(ell)), zeta);
}

Json to_json(const FlatCoords& fc) {
  Json j;
  j["i_max"] = fc.i_max;
  Json t = Json::object();
  for (const auto& [i, v] : fc.t) t[std::to_string(i)] = to_json(v);
  j["t"] = std::move(t);
  Json h = Json::array();
  for (const auto& v : fc.h) h.push_back(to_json(v));
  j["h"] = std::move(h);
  Json hh = Json::array();
  for (const auto& v : fc.hhat) hh.push_back(to_json(v));
  j["hhat"] = std::move(hh);
  return j;
}

FlatCoords flat_from_json(const Json& j) {
  FlatCoords fc;
  fc.i_max = j.at("i_max").get<int>();
  for (const auto& [key, val] : j.at("t").items()) fc.t[std::stoi(key)] = complex_from_json(val);
  for (const auto& v : j.at("h")) fc.h.push_back(complex_from_json(v));
  for (const auto& v : j.at("hhat")) fc.hhat.push_back(complex_from_json(v));
  return fc;
}

namespace {

Json loop_scalar_to_json(const LoopScalar& s) {
  Json arr = Json::array();
  for (int q = 0; q < s.nodes(); ++q) arr.push_back(to_json(s.at(q)));
  return arr;
}

LoopScalar loop_scalar_from_json(const Json& j) {
  std::vector<Complex> v;
  for (const auto& x : j) v.push_back(complex_from_json(x));
  return LoopScalar(std::move(v));
}

Json loop_series_to_json(const LoopSeries& s) {
  Json coeffs = Json::object();
  for (const auto& [e, c] : s.coeffs) coeffs[std::to_string(e)] = loop_scalar_to_json(c);
  return coeffs;
}

}  // namespace

Json to_json(const LoopPoint& p) {
  Json j;
  j["m"] = p.m;
  j["n"] = p.n;
  j["nodes"] = p.nodes();
  j["fourier_modes"] = p.fourier_modes;
  j["phi"] = loop_scalar_to_json(p.phi);
  j["ell"] = loop_series_to_json(p.ell);
  j["zeta"] = loop_series_to_json(p.zeta);
  return j;
}

LoopPoint loop_point_from_json(const Json& j) {
  LoopPoint p;
  p.m = j.at("m").get<int>();
  p.n = j.at("n").get<int>();
  p.fourier_modes = j.at("fourier_modes").get<int>();
  p.phi = loop_scalar_from_json(j.at("phi"));
  p.zeta = LoopSeries::zero(p.phi);
  for (const auto& [key, val] : j.at("zeta").items())
    p.zeta.coeffs[std::stoi(key)] = loop_scalar_from_json(val);
  p.ell = LoopSeries::zero(p.phi);
  for (const auto& [key, val] : j.at("ell").items())
    p.ell.coeffs[std::stoi(key)] = loop_scalar_from_json(val);
  return p;
}

}  // namespace frobwhit
