#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "ctoda/oracle.hpp"
#include "ctoda/pairspace.hpp"

using namespace ctoda;

TEST_CASE("mobius parameter domain") {
  CHECK_THROWS(mobius_params(1.0, 1.0, 0.0));
  CHECK_THROWS(mobius_params(Complex(0.8, 0.7), 1.0, 0.0));
  CHECK_THROWS(mobius_params(0.3, 0.0, 0.0));
  CHECK_THROWS(mobius_params(0.3, 1.0, 1.1));
  CHECK_NOTHROW(mobius_params(0.3, 1.2, 0.24));
}

TEST_CASE("mobius pair series") {
  ConformalPair triv = mobius_pair(mobius_params(0.0, 1.0, 0.0), 8, 128);
  CHECK((triv.f - ComplexSeries::monomial(1)).max_abs() < 1e-15);

  ConformalPair p = mobius_pair(mobius_params(0.3, 1.2, 0.24), 16, 256);
  for (int k = 1; k <= 16; ++k) {
    Complex expect = std::pow(-0.3, k - 1) / 1.2;
    CHECK(std::abs(p.f.coeff(k) - expect) < 1e-15);
  }
  CHECK(std::abs(p.g.coeff(1) - 1.2) < 1e-15);
  CHECK(std::abs(p.g.coeff(0) - 0.24) < 1e-15);
}

TEST_CASE("mobius moments: closed values and v-as-t relations") {
  MobiusParams mp = mobius_params(0.3, 1.2, 0.24);
  MomentSet ms = mobius_moments(mp, 8);
  CHECK(std::abs(ms.t(-1) + 0.24) < 1e-15);
  CHECK(std::abs(ms.t(0) - 1.44) < 1e-15);
  CHECK(std::abs(ms.t(1) - 0.36) < 1e-15);
  CHECK(std::abs(ms.v(1) - 0.3456) < 1e-15);
  CHECK(std::abs(ms.v(-1) + 0.5184) < 1e-15);
  // v_n = (-1)^n t0 t_{-1}^n, v_{-n} = -t0 t1^n
  for (int n = 1; n <= 8; ++n) {
    Complex vp = std::pow(-1.0, n) * ms.t(0) * std::pow(ms.t(-1), n);
    Complex vm = -ms.t(0) * std::pow(ms.t(1), n);
    CHECK(std::abs(ms.v(n) - vp) < 1e-14);
    CHECK(std::abs(ms.v(-n) - vm) < 1e-14);
  }
  MomentSet m0 = mobius_moments(mobius_params(0.0, 1.0, 0.0), 4);
  CHECK(std::abs(m0.t(0) - 1.0) < 1e-15);
  CHECK(std::abs(m0.v(0) + 1.0) < 1e-15);
}

TEST_CASE("mobius tau closed form and its gradient identities") {
  CHECK(std::abs(mobius_log_tau(mobius_params(0.0, 1.0, 0.0)) + 0.75) < 1e-15);

  // FD in the t-coordinates of the closed form reproduces v_{-1}, v_0, v_1.
  MobiusParams mp = mobius_params(0.3, 1.2, 0.24);
  MomentSet ms = mobius_moments(mp, 2);
  double h = 1e-6;
  // t_{-1} = -c: vary c
  Complex fd_m1 = (mobius_log_tau(mobius_params(0.3, 1.2, 0.24 - h)) -
                   mobius_log_tau(mobius_params(0.3, 1.2, 0.24 + h))) /
                  (2.0 * h);
  CHECK(std::abs(fd_m1 - ms.v(-1)) < 1e-6);
  // t_1 = a b: vary a
  Complex fd_p1 = (mobius_log_tau(mobius_params(0.3 + h, 1.2, 0.24)) -
                   mobius_log_tau(mobius_params(0.3 - h, 1.2, 0.24))) /
                  (2.0 * h * 1.2);
  CHECK(std::abs(fd_p1 - ms.v(1)) < 1e-6);
  // t_0 = b^2 with t_1 = ab held fixed
  double hb = 1e-6;
  auto at_b = [&](double b) {
    return mobius_log_tau(mobius_params(0.36 / b, b, 0.24));
  };
  Complex fd_0 = (at_b(1.2 + hb) - at_b(1.2 - hb)) / (2.0 * hb * 2.0 * 1.2);
  CHECK(std::abs(fd_0 - ms.v(0)) < 1e-6);
}

TEST_CASE("mobius homeo closed forms") {
  MobiusHomeoOracle id = mobius_homeo(0.0, 0.0, 8, 128);
  CHECK(std::abs(id.fourier.t(0) - 1.0) < 1e-15);
  CHECK(std::abs(id.gamma(Complex(0.0, 1.0)) - Complex(0.0, 1.0)) < 1e-15);

  MobiusHomeoOracle o = mobius_homeo(Complex(0.2), 0.0, 16, 256);
  CHECK(std::abs(o.fourier.t(1) + 0.2) < 1e-15);
  CHECK(std::abs(o.fourier.t(0) - 0.96) < 1e-15);
  CHECK(std::abs(o.fourier.t(-1) + 0.2) < 1e-15);
  CHECK(std::abs(o.params.b - 1.0 / std::sqrt(0.96)) < 1e-15);
  CHECK(std::abs(o.params.c + 0.2 / std::sqrt(0.96)) < 1e-15);

  // gamma and gamma_inv really are inverse
  for (int j = 0; j < 8; ++j) {
    double th = 0.77 * j;
    Complex w(std::cos(th), std::sin(th));
    CHECK(std::abs(o.gamma(o.gamma_inv(w)) - w) < 1e-14);
  }

  // conjugate-coordinate relations of the slice
  MobiusHomeoOracle oc = mobius_homeo(Complex(0.2, -0.13), 0.37, 16, 256);
  Complex t1 = oc.fourier.t(1), t0 = oc.fourier.t(0), tm1 = oc.fourier.t(-1);
  Complex den = t0 + t1 * tm1;
  CHECK(std::abs(std::conj(tm1) - t1 / den) < 1e-12);
  CHECK(std::abs(std::conj(t0) - t0 / (den * den)) < 1e-12);
  CHECK(std::abs(std::conj(t1) - tm1 / den) < 1e-12);
}

TEST_CASE("sigma fixed locus of the mobius family") {
  // b real, c = conj(a) b: t0 real and conj(t1) = -t_{-1} exactly
  Complex a(0.25, 0.15);
  double b = 1.1;
  MomentSet ms = mobius_moments(mobius_params(a, b, std::conj(a) * b), 6);
  CHECK(std::abs(ms.t(0).imag()) < 1e-15);
  CHECK(std::abs(std::conj(ms.t(1)) + ms.t(-1)) < 1e-15);
}

TEST_CASE("oracle pipeline agreement at complex parameters") {
  MobiusParams mp = mobius_params(Complex(0.2, 0.1), 1.1, Complex(-0.15, 0.08));
  ConformalPair p = mobius_pair(mp, 28, 256);
  MomentSet got = moments(p, 28);
  MomentSet want = mobius_moments(mp, 28);
  double worst = 0.0;
  for (int n = -16; n <= 16; ++n) {
    worst = std::max(worst, std::abs(got.t(n) - want.t(n)));
    worst = std::max(worst, std::abs(got.v(n) - want.v(n)));
  }
  CHECK(worst < 1e-10);
}
