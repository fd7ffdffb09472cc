#include "ctoda/tau.hpp"

#include <cmath>
#include <stdexcept>

namespace ctoda {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

Complex log_tau_integral(const ConformalPair& p, const MomentSet& ms) {
  PhiPsi pp = phi_psi(ms);
  ComplexSeries dphi = derivative(pp.phi);
  ComplexSeries dpsi = derivative(pp.psi);
  const size_t m = static_cast<size_t>(p.m);
  Complex i2(0.0), i1(0.0);
  for (size_t j = 0; j < m; ++j) {
    Complex zg = p.gs[j], zf = p.fs[j];
    Complex phi_g = eval(pp.phi, zg);
    Complex dphi_g = eval(dphi, zg);
    Complex psi_f = eval(pp.psi, zf);
    Complex dpsi_f = eval(dpsi, zf);
    i2 += p.grid[j] * (p.dgs[j] / zf) * (zg * dphi_g + 2.0 * phi_g);
    i1 += p.grid[j] * (zg * p.dfs[j] / (zf * zf)) * (zf * dpsi_f - 2.0 * psi_f);
  }
  double quarter_m = 4.0 * static_cast<double>(m);
  return 0.5 * ms.t(0) * ms.v(0) - 0.25 * ms.t(0) * ms.t(0) + i2 / quarter_m +
         i1 / quarter_m;
}

Complex log_tau_integral(const ConformalPair& p) {
  return log_tau_integral(p, moments(p, p.order()));
}

double log_tau_tail_estimate(const ConformalPair& p, const MomentSet& ms) {
  const int N = ms.order;
  double gmin = 1e300, fmax = 0.0;
  for (const Complex& z : p.gs) gmin = std::min(gmin, std::abs(z));
  for (const Complex& z : p.fs) fmax = std::max(fmax, std::abs(z));
  // Envelope over the last few orders: the very last moments can sit at the
  // quadrature noise floor and would overstate the tail.
  double tail_phi = 1e300, tail_psi = 1e300;
  for (int n = std::max(1, N - 4); n <= N; ++n) {
    tail_phi = std::min(tail_phi, std::abs(ms.v(n)) / n * std::pow(gmin, -n));
    tail_psi = std::min(tail_psi, std::abs(ms.v(-n)) / n * std::pow(fmax, n));
  }
  return std::max(tail_phi, tail_psi);
}

Complex log_tau_sum(const MomentSet& ms) {
  const int N = ms.order;
  Complex acc = 0.5 * ms.t(0) * ms.v(0) - 0.25 * ms.t(0) * ms.t(0);
  std::vector<double> mags(static_cast<size_t>(N) + 1, 0.0);
  for (int n = 1; n <= N; ++n) {
    Complex term = -0.25 * (n - 2) *
                   (ms.t(n) * ms.v(n) + ms.t(-n) * ms.v(-n));
    mags[static_cast<size_t>(n)] = std::abs(term);
    acc += term;
  }
  // the tail must have decayed: compare the last term with the mid-range
  if (N >= 6 && mags[static_cast<size_t>(N)] > 1e-8 &&
      mags[static_cast<size_t>(N)] >= mags[static_cast<size_t>(N / 2)])
    throw std::runtime_error("log_tau_sum: terms fail to decay");
  return acc;
}

VariationField variation_field(const ConformalPair& p, int n) {
  const int N = p.order();
  const size_t m = static_cast<size_t>(p.m);
  const int K = N + 2;

  // Faber polynomials of the inverse pair are plain projections of powers
  // of the forward series: P_n = (g^n)_{>=0}, Q_n = ((1/f)^n)_{<=0}.
  std::vector<Complex> u(m);
  if (n == 0) {
    for (size_t j = 0; j < m; ++j)
      u[j] = p.fs[j] * p.fs[j] / (p.grid[j] * p.dfs[j] * p.dgs[j]);
  } else {
    ComplexSeries poly =
        (n > 0)
            ? truncated(project(pow_int(p.g, n, 1, Window(-N - 2, n)),
                                Part::NonNegative),
                        Window(0, n))
            : truncated(project(pow_int(reciprocal(p.f, 1, Window(-1, N + 2)),
                                        -n, -1, Window(n, N + 2)),
                                Part::NonPositive),
                        Window(n, 0));
    ComplexSeries dpoly = derivative(poly);
    std::vector<Complex> dpoly_s = eval(dpoly, p.grid);
    for (size_t j = 0; j < m; ++j)
      u[j] = dpoly_s[j] * p.fs[j] * p.fs[j] / (p.dfs[j] * p.dgs[j]);
  }
  ComplexSeries modes = from_samples(CircleSamples(p.m, std::move(u)),
                                     Window(-K, K));

  ComplexSeries plus(Window(1, N)), minus(Window(-N, 1));
  plus.at(1) = 0.5 * modes.coeff(1);
  minus.at(1) = 0.5 * modes.coeff(1);
  for (int k = 2; k <= N; ++k) plus.at(k) = modes.coeff(k);
  for (int k = -N; k <= 0; ++k) minus.at(k) = modes.coeff(k);

  VariationField vf;
  vf.n = n;
  vf.df = -1.0 * mul(derivative(p.f), plus, Window(1, N));
  vf.dg = mul(derivative(p.g), minus, Window(-N, 1));
  return vf;
}

ConformalPair flow_step_along(const ConformalPair& p, const FieldFn& field,
                              double eps) {
  require(std::abs(eps) <= 1e-2, "flow_step: step size too large");
  if (eps == 0.0) return p;
  VariationField k1 = field(p);
  ConformalPair half = shifted_pair(p, k1.df, k1.dg, Complex(eps / 2.0));
  VariationField k2 = field(half);
  return shifted_pair(p, k2.df, k2.dg, Complex(eps));
}

ConformalPair flow_step(const ConformalPair& p, int n, double eps) {
  return flow_step_along(
      p, [n](const ConformalPair& q) { return variation_field(q, n); }, eps);
}

double check_coordinate_duality(const ConformalPair& p, int n, int m_idx,
                                double eps) {
  const int N = std::max({std::abs(n), std::abs(m_idx), 1});
  ConformalPair plus = flow_step(p, n, eps);
  ConformalPair minus = flow_step(p, n, -eps);
  MomentSet mp = moments(plus, N);
  MomentSet mm = moments(minus, N);
  Complex fd = (mp.t(m_idx) - mm.t(m_idx)) / (2.0 * eps);
  Complex expect = (n == m_idx) ? Complex(1.0) : Complex(0.0);
  return std::abs(fd - expect);
}

GrunskyTable inverse_grunsky(const ConformalPair& p, int N) {
  const int Kinv = std::max(48, 3 * N);
  ComplexSeries finv = invert_composition(p.f, Window(1, Kinv));
  ComplexSeries ginv = invert_composition(p.g, Window(-Kinv, 1));
  double fmin = 1e300, gmax = 0.0;
  for (const Complex& z : p.fs) fmin = std::min(fmin, std::abs(z));
  for (const Complex& z : p.gs) gmax = std::max(gmax, std::abs(z));
  GrunskyOptions opts;
  opts.r_in[0] = 0.70;
  opts.r_in[1] = 0.50;
  opts.r_out[0] = 1.50;
  opts.r_out[1] = 1.90;
  opts.inner_scale = 0.98 * fmin;
  opts.outer_scale = 1.02 * gmax;
  return grunsky_table(finv, ginv, N, opts);
}

double check_tau_gradient(const ConformalPair& p, int n, double eps) {
  const int N = p.order();
  ConformalPair plus = flow_step(p, n, eps);
  ConformalPair minus = flow_step(p, n, -eps);
  Complex fd = (log_tau_integral(plus, moments(plus, N)) -
                log_tau_integral(minus, moments(minus, N))) /
               (2.0 * eps);
  MomentSet ms = moments(p, N);
  return std::abs(fd - ms.v(n));
}

Complex second_difference_log_tau(const ConformalPair& p, const FieldFn& field,
                                  double eps) {
  const int N = p.order();
  ConformalPair plus = flow_step_along(p, field, eps);
  ConformalPair minus = flow_step_along(p, field, -eps);
  Complex lp = log_tau_integral(plus, moments(plus, N));
  Complex l0 = log_tau_integral(p, moments(p, N));
  Complex lm = log_tau_integral(minus, moments(minus, N));
  return (lp - 2.0 * l0 + lm) / (eps * eps);
}

double check_hessian(const ConformalPair& p, int m_idx, int n_idx, double eps,
                     const GrunskyTable& kappa) {
  Complex fd2;
  if (m_idx == n_idx) {
    fd2 = second_difference_log_tau(
        p,
        [m_idx](const ConformalPair& q) { return variation_field(q, m_idx); },
        eps);
  } else {
    auto sum_field = [m_idx, n_idx](double sign) {
      return [m_idx, n_idx, sign](const ConformalPair& q) {
        VariationField a = variation_field(q, m_idx);
        VariationField b = variation_field(q, n_idx);
        VariationField out;
        out.n = 0;
        out.df = a.df + sign * b.df;
        out.dg = a.dg + sign * b.dg;
        return out;
      };
    };
    Complex d_plus = second_difference_log_tau(p, sum_field(+1.0), eps);
    Complex d_minus = second_difference_log_tau(p, sum_field(-1.0), eps);
    fd2 = 0.25 * (d_plus - d_minus);
  }
  Complex expect;
  if (m_idx != 0 && n_idx != 0)
    expect = -std::abs(static_cast<double>(m_idx) * n_idx) *
             kappa.b(m_idx, n_idx);
  else if (m_idx == 0 && n_idx == 0)
    expect = -2.0 * kappa.b(0, 0);
  else {
    int mm = (m_idx != 0) ? m_idx : n_idx;
    expect = std::abs(static_cast<double>(mm)) * kappa.b(mm, 0);
  }
  return std::abs(fd2 - expect);
}

double check_hessian(const ConformalPair& p, int m_idx, int n_idx,
                     double eps) {
  GrunskyTable kappa =
      inverse_grunsky(p, std::max({std::abs(m_idx), std::abs(n_idx), 1}));
  return check_hessian(p, m_idx, n_idx, eps, kappa);
}

}  // namespace ctoda
