#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "ctoda/oracle.hpp"
#include "ctoda/toda.hpp"

using namespace ctoda;

namespace {

ConformalPair identity_pair(int N = 8, int m = 128) {
  ComplexSeries f(Window(1, N));
  f.at(1) = 1.0;
  ComplexSeries g(Window(-N, 1));
  g.at(1) = 1.0;
  return make_pair(f, g, m);
}

ConformalPair appendix_pair(int N = 16, int m = 256) {
  return mobius_pair(mobius_params(0.3, 1.2, 0.24), N, m);
}

std::mt19937 rng(99);
Complex rnd() {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  return Complex(d(rng), d(rng));
}

FlowedSeries random_flowed(int span) {
  ComplexSeries v(Window(-span, span)), d(Window(-span, span));
  for (int k = -span; k <= span; ++k) {
    v.at(k) = rnd();
    d.at(k) = rnd();
  }
  return FlowedSeries{v, d};
}

}  // namespace

TEST_CASE("poisson bracket: antisymmetry and Leibniz rule") {
  Window w(-12, 12);
  for (int trial = 0; trial < 5; ++trial) {
    FlowedSeries A = random_flowed(4), B = random_flowed(4), C = random_flowed(4);
    ComplexSeries ab = poisson_bracket(A, B, w);
    ComplexSeries ba = poisson_bracket(B, A, w);
    CHECK((ab + ba).max_abs() < 1e-12);

    // product with the Leibniz-compatible dt0
    FlowedSeries BC{mul(B.value, C.value),
                    mul(B.dt0, C.value) + mul(B.value, C.dt0)};
    ComplexSeries lhs = poisson_bracket(A, BC, w);
    ComplexSeries rhs = mul(B.value, poisson_bracket(A, C, w), w) +
                        mul(poisson_bracket(A, B, w), C.value, w);
    CHECK((lhs - rhs).max_abs() < 1e-10);
  }
  // {w, t0}-normalization: A = w with dt0 = 0, B = const with dt0 = 1
  FlowedSeries A{ComplexSeries::monomial(1), ComplexSeries::constant(0.0)};
  FlowedSeries B{ComplexSeries::constant(1.0), ComplexSeries::constant(1.0)};
  ComplexSeries br = poisson_bracket(A, B, Window(-2, 2));
  CHECK((br - ComplexSeries::monomial(1)).max_abs() < 1e-15);
  // {w, w} = 0
  FlowedSeries W{ComplexSeries::monomial(1), ComplexSeries::constant(0.0)};
  CHECK(poisson_bracket(W, W, Window(-2, 2)).max_abs() == 0.0);
}

TEST_CASE("lax generators") {
  ComplexSeries g(Window(-4, 1));
  g.at(1) = 1.0;
  ComplexSeries f(Window(1, 4));
  f.at(1) = 1.0;
  CHECK((lax_generator(g, f, 1, NegFlowConvention::PowersOfLtildeInverse) -
         ComplexSeries::monomial(1))
            .max_abs() < 1e-14);
  CHECK((lax_generator(g, f, 2, NegFlowConvention::PowersOfLtildeInverse) -
         ComplexSeries::monomial(2))
            .max_abs() < 1e-14);

  ComplexSeries gb(Window(-4, 1));
  gb.at(1) = 1.2;
  gb.at(0) = 0.24;
  ComplexSeries b1 = lax_generator(gb, f, 1, NegFlowConvention::PowersOfLtildeInverse);
  CHECK(std::abs(b1.coeff(1) - 1.2) < 1e-14);
  CHECK(std::abs(b1.coeff(0) - 0.12) < 1e-14);

  // negative flow, identity pair: resolved convention gives w^{-1},
  // the literal one collapses to zero
  ComplexSeries bt = lax_generator(g, f, -1, NegFlowConvention::PowersOfLtildeInverse);
  CHECK((bt - ComplexSeries::monomial(-1)).max_abs() < 1e-14);
  ComplexSeries bt_lit = lax_generator(g, f, -1, NegFlowConvention::PowersOfLtilde);
  CHECK(bt_lit.max_abs() < 1e-14);
}

TEST_CASE("lax residuals: identity and Appendix pairs") {
  LaxSetup s8 = pairspace_lax(8);
  CHECK(lax_residual(s8, identity_pair(), 1, 1e-4).max() < 1e-7);

  LaxSetup s = pairspace_lax(16);
  ConformalPair p = appendix_pair();
  CHECK(lax_residual(s, p, 1, 1e-4).max() < 1e-6);
  CHECK(lax_residual(s, p, -1, 1e-4).max() < 1e-6);
  CHECK(lax_residual(s, p, 2, 1e-4).max() < 1e-6);
}

TEST_CASE("negative-flow convention resolved empirically") {
  LaxSetup s = pairspace_lax(16);
  ConformalPair p = appendix_pair();
  double good =
      lax_residual(s, p, -1, 1e-4, NegFlowConvention::PowersOfLtildeInverse).max();
  double bad =
      lax_residual(s, p, -1, 1e-4, NegFlowConvention::PowersOfLtilde).max();
  CHECK(good < 1e-6);
  CHECK(bad > 1e-2);  // O(1): the literal generator vanishes identically
}

TEST_CASE("lax residual scales as O(eps^2)") {
  LaxSetup s = pairspace_lax(16);
  ConformalPair p = appendix_pair();
  for (int n : {1, -1, 2}) {
    double r1 = lax_residual(s, p, n, 4e-4).max();
    double r2 = lax_residual(s, p, n, 2e-4).max();
    double ratio = r1 / r2;
    CHECK(ratio > 2.8);
    CHECK(ratio < 5.7);
  }
}

TEST_CASE("orlov functions and RH identities") {
  ConformalPair id = identity_pair();
  MomentSet id_ms = moments(id, 8);
  OrlovReport rep0 = orlov(id, id_ms);
  CHECK(rep0.res_M_gf < 1e-13);
  CHECK(rep0.res_Mt_gf < 1e-13);
  CHECK(rep0.res_M_Mt < 1e-13);

  ConformalPair p = mobius_pair(mobius_params(0.3, 1.2, 0.24), 32, 256);
  MomentSet ms = moments(p, 32);
  OrlovReport rep = orlov(p, ms);
  CHECK(rep.tail_decayed);
  CHECK(rep.res_M_gf < 1e-8);
  CHECK(rep.res_Mt_gf < 1e-8);
  CHECK(rep.res_M_Mt < 1e-8);

  RhResidual rh = rh_identities(p, ms);
  CHECK(rh.m_vs_mt < 1e-8);
  CHECK(rh.factorization < 1e-8);

  // rotation covariance: residuals unchanged under f,g -> rotated pair
  const Complex I(0.0, 1.0);
  ComplexSeries fr(p.f.window()), gr(p.g.window());
  for (int k = fr.lo(); k <= fr.hi(); ++k)
    fr.at(k) = p.f.coeff(k) * std::pow(I, k - 1);
  for (int k = gr.lo(); k <= gr.hi(); ++k)
    gr.at(k) = p.g.coeff(k) * std::pow(I, k - 1);
  ConformalPair pr = make_pair(fr, gr, p.m);
  RhResidual rhr = rh_identities(pr, moments(pr, 32));
  CHECK(std::abs(rhr.m_vs_mt - rh.m_vs_mt) < 5e-9);
  CHECK(std::abs(rhr.factorization - rh.factorization) < 5e-9);
}

TEST_CASE("canonical pair: {L, M} = L") {
  ConformalPair p = appendix_pair();
  MomentSet ms = moments(p, 16);
  CHECK(canonical_pair_residual(p, ms, 1e-4) < 1e-6);
}

TEST_CASE("string equation") {
  CHECK(string_residual(identity_pair(), 1e-4) < 1e-8);
  CHECK(string_residual(appendix_pair(), 1e-4) < 1e-6);
}
