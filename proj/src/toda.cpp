#include "ctoda/toda.hpp"

#include <cmath>
#include <stdexcept>

namespace ctoda {

ComplexSeries poisson_bracket(const FlowedSeries& A, const FlowedSeries& B,
                              Window window) {
  ComplexSeries w1 = ComplexSeries::monomial(1);
  ComplexSeries term1 = mul(mul(w1, derivative(A.value), window), B.dt0, window);
  ComplexSeries term2 = mul(mul(w1, A.dt0, window), derivative(B.value), window);
  return term1 - term2;
}

ComplexSeries lax_generator(const ComplexSeries& L, const ComplexSeries& Ltilde,
                            int n, NegFlowConvention conv) {
  if (n == 0) throw std::invalid_argument("lax_generator: n must be nonzero");
  if (n >= 1) {
    ComplexSeries p = pow_int(L, n, 1, Window(L.lo() - n, n));
    return truncated(project(p, Part::Positive), Window(0, n)) +
           0.5 * project(p, Part::Zero);
  }
  int k = -n;
  if (conv == NegFlowConvention::PowersOfLtilde) {
    // literal reading: powers of Ltilde itself (positive exponents only, so
    // the projection usually annihilates everything)
    ComplexSeries p = pow_int(Ltilde, k, 1, Window(-k, Ltilde.hi() * k));
    return truncated(project(p, Part::Negative), Window(-k, 0)) +
           0.5 * project(p, Part::Zero);
  }
  // resolved: powers of Ltilde^{-1} = r/w + ...
  ComplexSeries rec = reciprocal(Ltilde, 1, Window(-1, Ltilde.hi() + 2));
  ComplexSeries p = pow_int(rec, k, -1, Window(-k, Ltilde.hi() + 2));
  return truncated(project(p, Part::Negative), Window(-k, 0)) +
         0.5 * project(p, Part::Zero);
}

LaxSetup pairspace_lax(int N) {
  LaxSetup s;
  s.flow = [](const ConformalPair& p, int n, double eps) {
    return flow_step(p, n, eps);
  };
  s.L = [](const ConformalPair& p) { return p.g; };
  s.Ltilde = [](const ConformalPair& p) { return p.f; };
  s.cmp_L = Window(-(N - 4), 1);
  s.cmp_Ltilde = Window(1, N - 4);
  return s;
}

LaxResidual lax_residual(const LaxSetup& s, const ConformalPair& p, int n,
                         double eps, NegFlowConvention conv) {
  ConformalPair p_plus = s.flow(p, n, eps);
  ConformalPair p_minus = s.flow(p, n, -eps);
  ConformalPair z_plus = s.flow(p, 0, eps);
  ConformalPair z_minus = s.flow(p, 0, -eps);
  double inv2e = 1.0 / (2.0 * eps);

  ComplexSeries L0 = s.L(p), Lt0 = s.Ltilde(p);
  FlowedSeries L{L0, inv2e * (s.L(z_plus) - s.L(z_minus))};
  FlowedSeries Lt{Lt0, inv2e * (s.Ltilde(z_plus) - s.Ltilde(z_minus))};
  FlowedSeries B{lax_generator(L0, Lt0, n, conv),
                 inv2e * (lax_generator(s.L(z_plus), s.Ltilde(z_plus), n, conv) -
                          lax_generator(s.L(z_minus), s.Ltilde(z_minus), n, conv))};

  ComplexSeries lhs_L = inv2e * (s.L(p_plus) - s.L(p_minus));
  ComplexSeries lhs_Lt = inv2e * (s.Ltilde(p_plus) - s.Ltilde(p_minus));

  Window wide_L(std::min(s.cmp_L.lo, L0.lo() - std::abs(n) - 2),
                std::max(s.cmp_L.hi, L0.hi() + std::abs(n) + 2));
  Window wide_Lt(std::min(s.cmp_Ltilde.lo, Lt0.lo() - std::abs(n) - 2),
                 std::max(s.cmp_Ltilde.hi, Lt0.hi() + std::abs(n) + 2));
  ComplexSeries br_L = poisson_bracket(B, L, wide_L);
  ComplexSeries br_Lt = poisson_bracket(B, Lt, wide_Lt);

  LaxResidual r;
  r.res_L = truncated(lhs_L - br_L, s.cmp_L).max_abs();
  r.res_Ltilde = truncated(lhs_Lt - br_Lt, s.cmp_Ltilde).max_abs();
  return r;
}

namespace {

// Evaluate sum_{n>=1} coef(n) * base_j^n, truncated at the smallest term
// (the series is only asymptotically valid on the curve; past the smallest
// term amplified moment noise grows).
void orlov_sum(std::vector<Complex>& acc, std::span<const Complex> base,
               int N, const std::function<Complex(int)>& coef,
               bool* decayed) {
  const size_t m = base.size();
  std::vector<double> mags(static_cast<size_t>(N), 0.0);
  {
    std::vector<Complex> pw(m, Complex(1.0));
    for (int n = 1; n <= N; ++n) {
      Complex c = coef(n);
      double cur = 0.0;
      for (size_t j = 0; j < m; ++j) {
        pw[j] *= base[j];
        cur = std::max(cur, std::abs(c * pw[j]));
      }
      mags[static_cast<size_t>(n - 1)] = cur;
    }
  }
  size_t keep = smallest_term_cutoff(mags);
  std::vector<Complex> pw(m, Complex(1.0));
  for (size_t n = 1; n <= keep; ++n) {
    Complex c = coef(static_cast<int>(n));
    for (size_t j = 0; j < m; ++j) {
      pw[j] *= base[j];
      acc[j] += c * pw[j];
    }
  }
  if (decayed && !mags.empty() && mags[0] > 0.0 &&
      mags[keep - 1] > 0.1 * mags[0])
    *decayed = false;
}

}  // namespace

OrlovReport orlov(const ConformalPair& p, const MomentSet& ms) {
  const size_t m = static_cast<size_t>(p.m);
  const int N = ms.order;
  OrlovReport rep;
  rep.M.assign(m, ms.t(0));
  rep.Mt.assign(m, ms.t(0));

  std::vector<Complex> inv_g(m), inv_f(m);
  for (size_t j = 0; j < m; ++j) {
    inv_g[j] = 1.0 / p.gs[j];
    inv_f[j] = 1.0 / p.fs[j];
  }
  // M = sum n t_n g^n + t0 + sum v_n g^{-n}
  orlov_sum(rep.M, p.gs, N,
            [&](int n) { return static_cast<double>(n) * ms.t(n); },
            &rep.tail_decayed);
  orlov_sum(rep.M, inv_g, N, [&](int n) { return ms.v(n); }, &rep.tail_decayed);
  // Mtilde = -sum n t_{-n} f^{-n} + t0 - sum v_{-n} f^n
  orlov_sum(rep.Mt, inv_f, N,
            [&](int n) { return -static_cast<double>(n) * ms.t(-n); },
            &rep.tail_decayed);
  orlov_sum(rep.Mt, p.fs, N, [&](int n) { return -ms.v(-n); },
            &rep.tail_decayed);

  for (size_t j = 0; j < m; ++j) {
    Complex gf = p.gs[j] * inv_f[j];
    rep.res_M_gf = std::max(rep.res_M_gf, std::abs(rep.M[j] - gf));
    rep.res_Mt_gf = std::max(rep.res_Mt_gf, std::abs(rep.Mt[j] - gf));
    rep.res_M_Mt = std::max(rep.res_M_Mt, std::abs(rep.M[j] - rep.Mt[j]));
  }
  return rep;
}

double canonical_pair_residual(const ConformalPair& p, const MomentSet& ms,
                               double eps) {
  const int N = ms.order;
  const int K = std::min(2 * N, p.m / 4);
  auto m_series = [&](const ConformalPair& q, const MomentSet& qm) {
    OrlovReport rep = orlov(q, qm);
    return from_samples(CircleSamples(q.m, std::move(rep.M)), Window(-K, K));
  };
  ConformalPair zp = flow_step(p, 0, eps);
  ConformalPair zm = flow_step(p, 0, -eps);
  double inv2e = 1.0 / (2.0 * eps);
  FlowedSeries M{m_series(p, ms),
                 inv2e * (m_series(zp, moments(zp, N)) -
                          m_series(zm, moments(zm, N)))};
  FlowedSeries L{p.g, inv2e * (zp.g - zm.g)};
  ComplexSeries br = poisson_bracket(L, M, Window(-K, K));
  CircleSamples vals = to_samples(truncated(br - p.g, Window(-K, K)), p.m);
  double worst = 0.0;
  for (const Complex& v : vals.values) worst = std::max(worst, std::abs(v));
  return worst;
}

double string_residual(const ConformalPair& p, double eps) {
  const int N = p.order();
  Window rw(-1, N);
  ConformalPair zp = flow_step(p, 0, eps);
  ConformalPair zm = flow_step(p, 0, -eps);
  double inv2e = 1.0 / (2.0 * eps);
  FlowedSeries L{p.g, inv2e * (zp.g - zm.g)};
  FlowedSeries Fi{reciprocal(p.f, 1, rw),
                  inv2e * (reciprocal(zp.f, 1, rw) - reciprocal(zm.f, 1, rw))};
  ComplexSeries br = poisson_bracket(L, Fi, Window(-N, N));
  CircleSamples vals =
      to_samples(br - ComplexSeries::constant(1.0), p.m);
  double worst = 0.0;
  for (const Complex& v : vals.values) worst = std::max(worst, std::abs(v));
  return worst;
}

RhResidual rh_identities(const ConformalPair& p, const MomentSet& ms) {
  OrlovReport rep = orlov(p, ms);
  RhResidual r;
  r.m_vs_mt = rep.res_M_Mt;
  for (int j = 0; j < p.m; ++j) {
    size_t sj = static_cast<size_t>(j);
    r.factorization = std::max(
        r.factorization, std::abs(p.fs[sj] * rep.Mt[sj] - p.gs[sj]));
  }
  return r;
}

}  // namespace ctoda
