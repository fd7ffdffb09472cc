#include "ctoda/json_io.hpp"

#include <stdexcept>

namespace ctoda {

Json series_to_json(const ComplexSeries& s) {
  Json j;
  j["lo"] = s.lo();
  j["hi"] = s.hi();
  std::vector<double> re, im;
  re.reserve(static_cast<size_t>(s.window().span()));
  im.reserve(static_cast<size_t>(s.window().span()));
  for (int k = s.lo(); k <= s.hi(); ++k) {
    re.push_back(s.coeff(k).real());
    im.push_back(s.coeff(k).imag());
  }
  j["re"] = re;
  j["im"] = im;
  return j;
}

ComplexSeries series_from_json(const Json& j) {
  int lo = j.at("lo").get<int>();
  int hi = j.at("hi").get<int>();
  auto re = j.at("re").get<std::vector<double>>();
  auto im = j.at("im").get<std::vector<double>>();
  Window w(lo, hi);
  if (static_cast<int>(re.size()) != w.span() || re.size() != im.size())
    throw std::invalid_argument("series json: coefficient count mismatch");
  ComplexSeries s(w);
  for (int k = lo; k <= hi; ++k) {
    size_t i = static_cast<size_t>(k - lo);
    s.at(k) = Complex(re[i], im[i]);
  }
  return s;
}

Json pair_to_json(const ConformalPair& p) {
  Json j;
  j["f"] = series_to_json(p.f);
  j["g"] = series_to_json(p.g);
  j["m"] = p.m;
  return j;
}

ConformalPair pair_from_json(const Json& j) {
  return make_pair(series_from_json(j.at("f")), series_from_json(j.at("g")),
                   j.at("m").get<int>());
}

Json moments_to_json(const MomentSet& ms) {
  Json j;
  j["order"] = ms.order;
  j["source"] = ms.source;
  Json t = Json::array(), v = Json::array();
  for (int n = -ms.order; n <= ms.order; ++n) {
    t.push_back({n, ms.t(n).real(), ms.t(n).imag()});
    v.push_back({n, ms.v(n).real(), ms.v(n).imag()});
  }
  j["t"] = t;
  j["v"] = v;
  j["t0_alt"] = {ms.t0_alt.real(), ms.t0_alt.imag()};
  return j;
}

MomentSet moments_from_json(const Json& j) {
  MomentSet ms;
  ms.order = j.at("order").get<int>();
  ms.source = j.value("source", "json");
  ms.tc.assign(static_cast<size_t>(2 * ms.order + 1), Complex(0.0));
  ms.vc.assign(static_cast<size_t>(2 * ms.order + 1), Complex(0.0));
  for (const auto& e : j.at("t"))
    ms.tref(e.at(0).get<int>()) =
        Complex(e.at(1).get<double>(), e.at(2).get<double>());
  for (const auto& e : j.at("v"))
    ms.vref(e.at(0).get<int>()) =
        Complex(e.at(1).get<double>(), e.at(2).get<double>());
  auto alt = j.at("t0_alt");
  ms.t0_alt = Complex(alt.at(0).get<double>(), alt.at(1).get<double>());
  return ms;
}

Json grunsky_to_json(const GrunskyTable& t) {
  Json j;
  j["order"] = t.order;
  Json entries = Json::array();
  for (int m = -t.order; m <= t.order; ++m)
    for (int n = -t.order; n <= m; ++n) {
      Complex b = t.b(m, n);
      entries.push_back({m, n, b.real(), b.imag()});
    }
  j["entries"] = entries;
  j["asymmetry"] = t.asymmetry;
  j["axis_mismatch"] = t.axis_mismatch;
  return j;
}

GrunskyTable grunsky_from_json(const Json& j) {
  GrunskyTable t;
  t.order = j.at("order").get<int>();
  t.entries.assign(
      static_cast<size_t>(2 * t.order + 1) * (2 * t.order + 1), Complex(0.0));
  for (const auto& e : j.at("entries")) {
    int m = e.at(0).get<int>(), n = e.at(1).get<int>();
    Complex b(e.at(2).get<double>(), e.at(3).get<double>());
    t.bref(m, n) = b;
    t.bref(n, m) = b;
  }
  t.asymmetry = j.value("asymmetry", 0.0);
  t.axis_mismatch = j.value("axis_mismatch", 0.0);
  return t;
}

Json homeo_to_json(const CircleHomeo& h) {
  Json j;
  j["m"] = h.m();
  std::vector<double> re, im;
  re.reserve(static_cast<size_t>(h.m()));
  im.reserve(static_cast<size_t>(h.m()));
  for (const Complex& g : h.gamma()) {
    re.push_back(g.real());
    im.push_back(g.imag());
  }
  j["gamma_re"] = re;
  j["gamma_im"] = im;
  return j;
}

CircleHomeo homeo_from_json(const Json& j) {
  int m = j.at("m").get<int>();
  auto re = j.at("gamma_re").get<std::vector<double>>();
  auto im = j.at("gamma_im").get<std::vector<double>>();
  if (static_cast<int>(re.size()) != m || re.size() != im.size())
    throw std::invalid_argument("homeo json: sample count mismatch");
  std::vector<Complex> gamma(static_cast<size_t>(m));
  for (int k = 0; k < m; ++k)
    gamma[static_cast<size_t>(k)] =
        Complex(re[static_cast<size_t>(k)], im[static_cast<size_t>(k)]);
  return CircleHomeo::from_samples(m, std::move(gamma));
}

}  // namespace ctoda
