#include "ctoda/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace ctoda {

MobiusParams mobius_params(Complex a, Complex b, Complex c) {
  if (!(std::abs(a) < 1.0))
    throw std::invalid_argument("mobius: need |a| < 1");
  if (!(std::abs(b) > 0.0))
    throw std::invalid_argument("mobius: need b != 0");
  if (!(std::abs(c / b) < 1.0))
    throw std::invalid_argument("mobius: need |c/b| < 1");
  return MobiusParams{a, b, c};
}

ConformalPair mobius_pair(const MobiusParams& p, int N, int m) {
  // f = w/(b(1+aw)) = sum_k (-a)^{k-1}/b w^k
  ComplexSeries f(Window(1, N));
  Complex coef = 1.0 / p.b;
  for (int k = 1; k <= N; ++k) {
    f.at(k) = coef;
    coef *= -p.a;
  }
  ComplexSeries g(Window(-N, 1));
  g.at(1) = p.b;
  g.at(0) = p.c;
  return make_pair(f, g, m);
}

MomentSet mobius_moments(const MobiusParams& p, int N) {
  MomentSet ms;
  ms.order = N;
  ms.source = "mobius-closed-form";
  ms.tc.assign(static_cast<size_t>(2 * N + 1), Complex(0.0));
  ms.vc.assign(static_cast<size_t>(2 * N + 1), Complex(0.0));
  Complex b2 = p.b * p.b;
  ms.tref(-1) = -p.c;
  ms.tref(0) = b2;
  ms.t0_alt = b2;
  if (N >= 1) ms.tref(1) = p.a * p.b;
  Complex vpos = b2, vneg = -b2;
  for (int n = 1; n <= N; ++n) {
    vpos *= p.c;                      // b^2 c^n
    vneg *= p.b * p.a;                // -b^{n+2} a^n
    ms.vref(n) = vpos;
    ms.vref(-n) = vneg;
  }
  ms.vref(0) = b2 * std::log(b2) - b2 + p.a * p.b * p.c;
  return ms;
}

Complex mobius_log_tau(const MobiusParams& p) {
  Complex t0 = p.b * p.b;
  Complex tm1 = -p.c, t1 = p.a * p.b;
  return 0.25 * t0 * t0 * std::log(t0 * t0) - 0.75 * t0 * t0 - tm1 * t0 * t1;
}

Complex MobiusHomeoOracle::gamma(Complex w) const {
  return std::exp(Complex(0.0, -alpha)) * (w + std::conj(a)) / (1.0 + a * w);
}

Complex MobiusHomeoOracle::gamma_inv(Complex w) const {
  Complex e = std::exp(Complex(0.0, alpha));
  return (e * w - std::conj(a)) / (1.0 - a * e * w);
}

MobiusHomeoOracle mobius_homeo(Complex a, double alpha, int N, int m) {
  if (!(std::abs(a) < 1.0))
    throw std::invalid_argument("mobius_homeo: need |a| < 1");
  double s = std::sqrt(1.0 - std::norm(a));
  Complex half = std::exp(Complex(0.0, alpha / 2.0));
  MobiusHomeoOracle o;
  o.a = a;
  o.alpha = alpha;
  o.params = mobius_params(a, half / s, -std::conj(a) / (half * s));
  o.pair = mobius_pair(o.params, N, m);

  MomentSet ms;
  ms.order = N;
  ms.source = "mobius-closed-form";
  ms.tc.assign(static_cast<size_t>(2 * N + 1), Complex(0.0));
  ms.vc.assign(static_cast<size_t>(2 * N + 1), Complex(0.0));
  Complex em = std::exp(Complex(0.0, -alpha));
  double r2 = 1.0 - std::norm(a);
  Complex t0 = em * r2;
  ms.tref(0) = t0;
  ms.t0_alt = t0;
  if (N >= 1) {
    ms.tref(1) = -a;
    ms.tref(-1) = -std::conj(a) * em;
  }
  for (int n = 1; n <= N; ++n) {
    // v_n = e^{-i(n+1)alpha}(1-|a|^2) conj(a)^n
    ms.vref(n) = std::exp(Complex(0.0, -(n + 1) * alpha)) * r2 *
                 std::pow(std::conj(a), n);
    // v_{-n} = (-1)^{n-1} e^{-i alpha} a^n (1-|a|^2)
    ms.vref(-n) = ((n % 2 == 1) ? 1.0 : -1.0) * em * std::pow(a, n) * r2;
  }
  ms.vref(0) = t0 * std::log(t0) - t0 - ms.t(1) * ms.t(-1);
  o.fourier = ms;
  o.log_tau = 0.25 * t0 * t0 * std::log(t0 * t0) - 0.75 * t0 * t0 -
              ms.t(-1) * t0 * ms.t(1);
  return o;
}

}  // namespace ctoda
