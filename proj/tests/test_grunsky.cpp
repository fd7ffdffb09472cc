#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "ctoda/grunsky.hpp"
#include "ctoda/series.hpp"

using namespace ctoda;

namespace {

const Complex I(0.0, 1.0);

// Appendix family: f = w/(b(1+aw)) truncated at order N, g = bw + c.
ComplexSeries mobius_f(Complex a, Complex b, int N) {
  ComplexSeries f(Window(1, N));
  Complex c = 1.0 / b;
  for (int k = 1; k <= N; ++k) {
    f.at(k) = c;
    c *= -a;
  }
  return f;
}

ComplexSeries affine_g(Complex b, Complex c, int N) {
  ComplexSeries g(Window(-N, 1));
  g.at(1) = b;
  g.at(0) = c;
  return g;
}

}  // namespace

TEST_CASE("identity pair: only the universal mixed diagonal survives") {
  // log((z - zeta)/z) = -sum_k (1/k) zeta^k z^-k forces b_{k,-k} = 1/k even
  // for the identity pair; everything else vanishes.
  int N = 8;
  ComplexSeries F = ComplexSeries::monomial(1);
  ComplexSeries G = affine_g(1.0, 0.0, N);
  GrunskyTable tbl = grunsky_table(F, G, N, GrunskyOptions{.grid = 128});
  for (int m = -N; m <= N; ++m)
    for (int n = -N; n <= N; ++n) {
      Complex expect(0.0);
      if (m == -n && m != 0) expect = 1.0 / std::abs(m);
      CHECK(std::abs(tbl.b(m, n) - expect) < 1e-12);
    }
  CHECK(tbl.asymmetry < 1e-12);
  CHECK(tbl.axis_mismatch < 1e-10);
}

TEST_CASE("F=z, G=z+c/z: diagonal closed form b_kk = c^k/k") {
  // log((G(z)-G(zeta))/(z-zeta)) = log(1 - c/(z zeta)) = -sum c^k/k (z zeta)^-k
  int N = 8;
  double c = 0.2;
  ComplexSeries F = ComplexSeries::monomial(1);
  ComplexSeries G = affine_g(1.0, 0.0, N);
  G.at(-1) = c;
  GrunskyTable tbl = grunsky_table(F, G, N);
  for (int m = 1; m <= N; ++m)
    for (int n = 1; n <= N; ++n) {
      Complex expect = (m == n) ? Complex(std::pow(c, m) / m) : Complex(0.0);
      CHECK(std::abs(tbl.b(m, n) - expect) < 1e-12);
    }
  CHECK(std::abs(tbl.b(1, 2)) < 1e-12);
  CHECK(std::abs(tbl.b(1, 1) - 0.2) < 1e-12);
  CHECK(std::abs(tbl.b(2, 2) - 0.02) < 1e-12);
}

TEST_CASE("Appendix pair with affine G: upper block vanishes, b00 = log b") {
  int N = 12;
  Complex a(0.3), b(1.2), c(0.24);
  ComplexSeries F = mobius_f(a, b, 24);
  ComplexSeries G = affine_g(b, c, N);
  GrunskyTable tbl = grunsky_table(F, G, N);
  for (int m = 1; m <= N; ++m)
    for (int n = 1; n <= N; ++n) CHECK(std::abs(tbl.b(m, n)) < 1e-11);
  CHECK(std::abs(tbl.b(0, 0) - std::log(1.2)) < 1e-13);
  CHECK(tbl.asymmetry < 1e-11);
  CHECK(tbl.axis_mismatch < 1e-10);
}

TEST_CASE("faber: affine G and trivial maps") {
  int N = 6;
  Complex b(1.2), c(0.24);
  // G = bz + c: P_1 = (w-c)/b, P_2 = ((w-c)/b)^2
  FaberPolys fp = faber(ComplexSeries::monomial(1), affine_g(b, c, N), N);
  CHECK(std::abs(fp.P[1].coeff(1) - 1.0 / b) < 1e-13);
  CHECK(std::abs(fp.P[1].coeff(0) + c / b) < 1e-13);
  CHECK(std::abs(fp.P[2].coeff(2) - 1.0 / (b * b)) < 1e-13);
  CHECK(std::abs(fp.P[2].coeff(1) + 2.0 * c / (b * b)) < 1e-13);
  CHECK(std::abs(fp.P[2].coeff(0) - c * c / (b * b)) < 1e-13);
  // F = z: Q_n = w^-n
  for (int n = 1; n <= N; ++n) {
    CHECK(std::abs(fp.Q[static_cast<size_t>(n)].coeff(-n) - 1.0) < 1e-12);
    for (int k = -n + 1; k <= 0; ++k)
      CHECK(std::abs(fp.Q[static_cast<size_t>(n)].coeff(k)) < 1e-12);
  }
  // G = z: P_n = w^n
  FaberPolys fpid = faber(ComplexSeries::monomial(1), affine_g(1.0, 0.0, N), N);
  for (int n = 1; n <= N; ++n) {
    CHECK(std::abs(fpid.P[static_cast<size_t>(n)].coeff(n) - 1.0) < 1e-12);
    for (int k = 0; k < n; ++k)
      CHECK(std::abs(fpid.P[static_cast<size_t>(n)].coeff(k)) < 1e-12);
  }
}

TEST_CASE("faber expansion identities") {
  SUBCASE("identity pair: all residuals at rounding level") {
    int N = 8;
    auto rep = verify_faber_expansions(ComplexSeries::monomial(1),
                                       affine_g(1.0, 0.0, N), N,
                                       GrunskyOptions{.grid = 128});
    CHECK(rep.max_residual < 1e-12);
  }
  SUBCASE("G = z + 0.2/z, F = z at N = 8") {
    int N = 8;
    ComplexSeries G = affine_g(1.0, 0.0, N);
    G.at(-1) = 0.2;
    auto rep = verify_faber_expansions(ComplexSeries::monomial(1), G, N);
    CHECK(rep.max_residual < 1e-11);
  }
  SUBCASE("Appendix pair at N = 12") {
    int N = 12;
    auto rep = verify_faber_expansions(mobius_f(0.3, 1.2, 24),
                                       affine_g(1.2, 0.24, N), N);
    CHECK(rep.max_residual < 1e-10);
  }
}

TEST_CASE("random perturbed pair: symmetry and identities at N = 16") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  int N = 16;
  ComplexSeries F(Window(1, N));
  F.at(1) = 1.0;
  for (int k = 2; k <= N; ++k)
    F.at(k) = 0.25 * std::pow(0.4, k - 1) * Complex(d(rng), d(rng));
  ComplexSeries G(Window(-N, 1));
  G.at(1) = 1.0;
  for (int k = 0; k >= -N; --k)
    G.at(k) = 0.25 * std::pow(0.4, 1 - k) * Complex(d(rng), d(rng));
  GrunskyTable tbl = grunsky_table(F, G, N);
  CHECK(tbl.asymmetry < 1e-11);
  CHECK(tbl.axis_mismatch < 1e-9);
  auto rep = verify_faber_expansions(F, G, N);
  CHECK(rep.max_residual < 1e-10);
}

TEST_CASE("scaling covariance under rotation rho = i") {
  // (F, G) -> (F(rho z)/rho, G(rho z)/rho) sends b_{m,n} to rho^{-(m+n)} b_{m,n}.
  int N = 6;
  ComplexSeries F = mobius_f(Complex(0.25, 0.1), 1.1, 18);
  ComplexSeries G = affine_g(1.1, Complex(0.2, -0.1), N);
  G.at(-1) = Complex(0.05, 0.02);
  G.at(-2) = Complex(-0.01, 0.015);

  auto rotate = [&](const ComplexSeries& s) {
    ComplexSeries r(s.window());
    for (int k = s.lo(); k <= s.hi(); ++k)
      r.at(k) = s.coeff(k) * std::pow(I, k - 1);
    return r;
  };
  GrunskyTable t0 = grunsky_table(F, G, N);
  GrunskyTable t1 = grunsky_table(rotate(F), rotate(G), N);
  for (int m = -N; m <= N; ++m)
    for (int n = -N; n <= N; ++n) {
      Complex expect = t0.b(m, n) * std::pow(I, -(m + n));
      CHECK(std::abs(t1.b(m, n) - expect) < 1e-11);
    }
}

TEST_CASE("bad radii are rejected") {
  // A pair whose image curve crosses the default exterior probe radius:
  // G(z) = z + 3/z is not univalent on |z| in (1, sqrt(3)).
  int N = 4;
  ComplexSeries G = affine_g(1.0, 0.0, N);
  G.at(-1) = 3.0;
  CHECK_THROWS_AS(grunsky_table(ComplexSeries::monomial(1), G, N),
                  std::domain_error);
}
