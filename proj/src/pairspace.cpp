#include "ctoda/pairspace.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

namespace ctoda {

namespace {

constexpr double kPi = std::numbers::pi;

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

double min_pairwise_distance(std::span<const Complex> pts) {
  double best = 1e300;
  const size_t n = pts.size();
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      best = std::min(best, std::abs(pts[i] - pts[j]));
  return best;
}

}  // namespace

ConformalPair make_pair(const ComplexSeries& f, const ComplexSeries& g, int m) {
  require(m > 0 && (m & (m - 1)) == 0, "pair: grid size must be a power of two");
  ConformalPair p;
  p.f = truncated(f, Window(1, std::max(1, f.hi())));
  p.g = truncated(g, Window(std::min(-1, g.lo()), 1));
  p.m = m;
  require(m >= 8 * p.order(), "pair: grid too small for the series order");

  Complex a1 = p.a1(), b = p.b();
  require(std::abs(a1) > 0.0 && std::abs(b) > 0.0,
          "pair: zero leading coefficient");
  require(std::abs(std::log(std::abs(a1))) <= 3.0,
          "pair: leading coefficient badly scaled (quadrature conditioning)");
  require(std::abs(a1 * b - 1.0) <= 1e-12, "pair: normalization a1*b != 1");

  p.grid = circle_points(1.0, m);
  p.fs = to_samples(p.f, m).values;
  p.gs = to_samples(p.g, m).values;
  p.dfs = to_samples(derivative(p.f), m).values;
  p.dgs = to_samples(derivative(p.g), m).values;

  for (const Complex& v : p.fs)
    require(std::abs(v) < 1e6, "pair: f samples unbounded");
  for (const Complex& v : p.gs)
    require(std::abs(v) > 1e-12, "pair: g vanishes on the circle");
  require(winding_number(p.gs, Complex(0.0)) == 1,
          "pair: 0 is not enclosed by the g-curve");
  require(min_pairwise_distance(p.fs) > 1e-9,
          "pair: f fails the grid injectivity proxy");
  require(min_pairwise_distance(p.gs) > 1e-9,
          "pair: g fails the grid injectivity proxy");
  return p;
}

ConformalPair normalize_pair(const ComplexSeries& f_raw,
                             const ComplexSeries& g_raw, int m) {
  Complex a1 = f_raw.coeff(1), b = g_raw.coeff(1);
  require(std::abs(a1) > 0.0 && std::abs(b) > 0.0,
          "normalize_pair: zero leading coefficient");
  Complex r = std::sqrt(1.0 / (a1 * b));
  return make_pair(r * f_raw, r * g_raw, m);
}

ConformalPair shifted_pair(const ConformalPair& p, const ComplexSeries& df,
                           const ComplexSeries& dg, Complex eps) {
  return normalize_pair(p.f + eps * df, p.g + eps * dg, p.m);
}

std::vector<Complex> log_ratio_samples(const ComplexSeries& s,
                                       std::span<const Complex> values,
                                       std::span<const Complex> grid) {
  std::vector<Complex> ratio(values.size());
  for (size_t j = 0; j < values.size(); ++j) ratio[j] = values[j] / grid[j];
  std::vector<Complex> lg;
  if (!unwrapped_log(ratio, lg))
    throw std::runtime_error(
        "log branch winds around the origin (univalence proxy violated)");
  Complex mean(0.0);
  for (const Complex& v : lg) mean += v;
  mean /= static_cast<double>(lg.size());
  Complex lead = std::log(s.coeff(1));
  double k = std::round((lead.imag() - mean.imag()) / (2.0 * kPi));
  Complex shift(0.0, 2.0 * kPi * k);
  for (Complex& v : lg) v += shift;
  return lg;
}

MomentSet moments(const ConformalPair& p, int N) {
  const int m = p.m;
  for (const Complex& v : p.fs)
    if (!(std::abs(v) > 1e-12))
      throw std::runtime_error("moments: singular integrand, f vanishes on grid");

  MomentSet ms;
  ms.order = N;
  ms.source = "pair-quadrature";
  ms.tc.assign(static_cast<size_t>(2 * N + 1), Complex(0.0));
  ms.vc.assign(static_cast<size_t>(2 * N + 1), Complex(0.0));

  // Incremental power ladders: gp = g^n, gm = g^-n, fp = f^{n-2}, fm = f^{-n-2}.
  std::vector<Complex> inv_f(static_cast<size_t>(m)), inv_g(static_cast<size_t>(m));
  for (int j = 0; j < m; ++j) {
    inv_f[static_cast<size_t>(j)] = 1.0 / p.fs[static_cast<size_t>(j)];
    inv_g[static_cast<size_t>(j)] = 1.0 / p.gs[static_cast<size_t>(j)];
  }
  std::vector<Complex> gp = inv_g, gm = inv_g;  // start at g^{-1} for both uses
  // t_n and v_n share the factor (1/f) g' w.
  std::vector<Complex> base_g(static_cast<size_t>(m)), base_f(static_cast<size_t>(m));
  for (int j = 0; j < m; ++j) {
    base_g[static_cast<size_t>(j)] = inv_f[static_cast<size_t>(j)] *
                                     p.dgs[static_cast<size_t>(j)] *
                                     p.grid[static_cast<size_t>(j)];
    base_f[static_cast<size_t>(j)] =
        p.gs[static_cast<size_t>(j)] * p.dfs[static_cast<size_t>(j)] *
        p.grid[static_cast<size_t>(j)];
  }

  // t0 both ways.
  {
    Complex acc1(0.0), acc2(0.0);
    for (int j = 0; j < m; ++j) {
      acc1 += base_g[static_cast<size_t>(j)];
      acc2 += base_f[static_cast<size_t>(j)] * inv_f[static_cast<size_t>(j)] *
              inv_f[static_cast<size_t>(j)];
    }
    ms.tref(0) = acc1 / static_cast<double>(m);
    ms.t0_alt = acc2 / static_cast<double>(m);
  }

  // n >= 1: t_n with g^-n, v_n with g^n, t_-n with f^{n-2}, v_-n with f^{-n-2}.
  std::vector<Complex> gpow_pos = p.gs;  // g^1
  std::vector<Complex> gpow_neg = inv_g;  // g^-1
  std::vector<Complex> fpow_up(static_cast<size_t>(m), Complex(1.0));   // f^{n-2}, n=1 -> f^{-1}
  std::vector<Complex> fpow_dn(static_cast<size_t>(m));                 // f^{-n-2}, n=1 -> f^{-3}
  for (int j = 0; j < m; ++j) {
    fpow_up[static_cast<size_t>(j)] = inv_f[static_cast<size_t>(j)];
    Complex i2 = inv_f[static_cast<size_t>(j)] * inv_f[static_cast<size_t>(j)];
    fpow_dn[static_cast<size_t>(j)] = i2 * inv_f[static_cast<size_t>(j)];
  }
  for (int n = 1; n <= N; ++n) {
    Complex t_pos(0.0), v_pos(0.0), t_neg(0.0), v_neg(0.0);
    for (int j = 0; j < m; ++j) {
      size_t sj = static_cast<size_t>(j);
      t_pos += gpow_neg[sj] * base_g[sj];
      v_pos += gpow_pos[sj] * base_g[sj];
      t_neg += fpow_up[sj] * base_f[sj];
      v_neg += fpow_dn[sj] * base_f[sj];
    }
    ms.tref(n) = t_pos / static_cast<double>(n * m);
    ms.vref(n) = v_pos / static_cast<double>(m);
    ms.tref(-n) = -t_neg / static_cast<double>(n * m);
    ms.vref(-n) = -v_neg / static_cast<double>(m);
    if (n < N) {
      for (int j = 0; j < m; ++j) {
        size_t sj = static_cast<size_t>(j);
        gpow_pos[sj] *= p.gs[sj];
        gpow_neg[sj] *= inv_g[sj];
        fpow_up[sj] *= p.fs[sj];
        fpow_dn[sj] *= inv_f[sj];
      }
    }
  }

  // v0: branch-tracked logs.
  {
    std::vector<Complex> Lf = log_ratio_samples(p.f, p.fs, p.grid);
    std::vector<Complex> Lg = log_ratio_samples(p.g, p.gs, p.grid);
    Complex acc(0.0);
    for (int j = 0; j < m; ++j) {
      size_t sj = static_cast<size_t>(j);
      Complex term = Lg[sj] * p.dgs[sj] * inv_f[sj] -
                     Lf[sj] * p.gs[sj] * p.dfs[sj] * inv_f[sj] * inv_f[sj] -
                     p.gs[sj] * inv_f[sj] / p.grid[sj];
      acc += term * p.grid[sj];
    }
    ms.vref(0) = acc / static_cast<double>(m);
  }
  return ms;
}

namespace {

CauchyProbe cauchy_probe(std::span<const Complex> curve,
                         std::span<const Complex> numer,
                         std::span<const Complex> grid, double speed,
                         Complex z) {
  CauchyProbe out;
  out.side = winding_number(curve, z);
  double dist = 1e300;
  for (const Complex& c : curve) dist = std::min(dist, std::abs(c - z));
  double h = 2.0 * kPi / static_cast<double>(grid.size());
  out.degraded = dist < 10.0 * h * speed;
  Complex acc(0.0);
  for (size_t j = 0; j < curve.size(); ++j)
    acc += numer[j] * grid[j] / (curve[j] - z);
  out.value = acc / static_cast<double>(grid.size());
  return out;
}

}  // namespace

CauchyProbe s_plus_minus(const ConformalPair& p, Complex z) {
  std::vector<Complex> numer(static_cast<size_t>(p.m));
  for (int j = 0; j < p.m; ++j) {
    size_t sj = static_cast<size_t>(j);
    numer[sj] = p.dgs[sj] / p.fs[sj];
  }
  double speed = 0.0;
  for (const Complex& d : p.dgs) speed = std::max(speed, std::abs(d));
  return cauchy_probe(p.gs, numer, p.grid, speed, z);
}

CauchyProbe s_tilde_plus_minus(const ConformalPair& p, Complex z) {
  std::vector<Complex> numer(static_cast<size_t>(p.m));
  for (int j = 0; j < p.m; ++j) {
    size_t sj = static_cast<size_t>(j);
    numer[sj] = p.gs[sj] * p.dfs[sj] / (p.fs[sj] * p.fs[sj]);
  }
  double speed = 0.0;
  for (const Complex& d : p.dfs) speed = std::max(speed, std::abs(d));
  return cauchy_probe(p.fs, numer, p.grid, speed, z);
}

// Each jump sum is truncated at its smallest term: the series are only
// asymptotically valid on the curve samples, and past the smallest term the
// quadrature noise in the high moments, amplified by the powers of f or g,
// grows instead of the tail shrinking.
namespace {

void jump_sum(std::vector<Complex>& acc, std::span<const Complex> base,
              int N, const std::function<Complex(int)>& coef) {
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
}

}  // namespace

JumpResidual jump_residual(const ConformalPair& p, const MomentSet& ms) {
  const int N = ms.order;
  const size_t m = static_cast<size_t>(p.m);
  std::vector<Complex> inv_f(m), inv_g(m);
  for (size_t j = 0; j < m; ++j) {
    inv_f[j] = 1.0 / p.fs[j];
    inv_g[j] = 1.0 / p.gs[j];
  }
  // rho2: 1/f(w) = sum n t_n z^{n-1} + t0/z + sum v_n z^{-n-1} at z = g(w)
  // the t_n-sum uses z^{n-1} = g^n / g, the v_n-sum z^{-n-1} = g^{-n} / g
  std::vector<Complex> rhs2(m);
  for (size_t j = 0; j < m; ++j) rhs2[j] = ms.t(0) * inv_g[j];
  {
    std::vector<Complex> tpart(m, Complex(0.0)), vpart(m, Complex(0.0));
    jump_sum(tpart, p.gs, N,
             [&](int n) { return static_cast<double>(n) * ms.t(n); });
    jump_sum(vpart, inv_g, N, [&](int n) { return ms.v(n); });
    for (size_t j = 0; j < m; ++j)
      rhs2[j] += tpart[j] * inv_g[j] + vpart[j] * inv_g[j];
  }
  // rho1: g/f^2 = -sum n t_{-n} z^{-n-1} + t0/z - sum v_{-n} z^{n-1}, z = f(w)
  std::vector<Complex> rhs1(m);
  for (size_t j = 0; j < m; ++j) rhs1[j] = ms.t(0) * inv_f[j];
  {
    std::vector<Complex> tpart(m, Complex(0.0)), vpart(m, Complex(0.0));
    jump_sum(tpart, inv_f, N,
             [&](int n) { return -static_cast<double>(n) * ms.t(-n); });
    jump_sum(vpart, p.fs, N, [&](int n) { return -ms.v(-n); });
    for (size_t j = 0; j < m; ++j)
      rhs1[j] += tpart[j] * inv_f[j] + vpart[j] * inv_f[j];
  }
  JumpResidual r;
  for (size_t j = 0; j < m; ++j) {
    r.rho2 = std::max(r.rho2, std::abs(inv_f[j] - rhs2[j]));
    r.rho1 = std::max(r.rho1, std::abs(p.gs[j] * inv_f[j] * inv_f[j] - rhs1[j]));
  }
  return r;
}

PhiPsi phi_psi(const MomentSet& ms) {
  const int N = ms.order;
  PhiPsi pp{ComplexSeries(Window(-N, -1)), ComplexSeries(Window(1, N))};
  for (int n = 1; n <= N; ++n) {
    pp.phi.at(-n) = ms.v(n) / static_cast<double>(n);
    pp.psi.at(n) = ms.v(-n) / static_cast<double>(n);
  }
  return pp;
}

double psi_derivative_residual(const ConformalPair& p, const MomentSet& ms,
                               const PhiPsi& pp, Complex z) {
  (void)ms;
  Complex dpsi = eval(derivative(pp.psi), z);
  CauchyProbe st = s_tilde_plus_minus(p, z);
  if (st.side != 1)
    throw std::invalid_argument("psi residual probe must be interior to f(S1)");
  return std::abs(dpsi + st.value);
}

double phi_derivative_residual(const ConformalPair& p, const MomentSet& ms,
                               const PhiPsi& pp, Complex z) {
  Complex dphi = eval(derivative(pp.phi), z);
  CauchyProbe s = s_plus_minus(p, z);
  if (s.side != 0)
    throw std::invalid_argument("phi residual probe must be exterior to g(S1)");
  return std::abs(dphi - s.value - ms.t(0) / z);
}

Complex invert_map_at(const ComplexSeries& s, const ComplexSeries& ds,
                      Complex target, Complex start, double tol) {
  Complex x = start;
  for (int it = 0; it < 60; ++it) {
    Complex err = eval(s, x) - target;
    if (std::abs(err) < tol) return x;
    Complex d = eval(ds, x);
    if (!(std::abs(d) > 1e-14))
      throw std::runtime_error("invert_map_at: derivative vanished");
    x -= err / d;
  }
  if (std::abs(eval(s, x) - target) < 1e-9) return x;  // slow but acceptable
  throw std::runtime_error("invert_map_at: Newton failed to converge");
}

double composition_variation_residual(const ConformalPair& p,
                                      const ComplexSeries& df,
                                      const ComplexSeries& dg, double eps,
                                      int stride) {
  ConformalPair plus = shifted_pair(p, df, dg, Complex(eps));
  ConformalPair minus = shifted_pair(p, df, dg, Complex(-eps));
  ComplexSeries dfp = derivative(plus.f), dgp = derivative(plus.g);
  ComplexSeries dfm = derivative(minus.f), dgm = derivative(minus.g);
  double worst = 0.0;
  for (int j = 0; j < p.m; j += stride) {
    size_t sj = static_cast<size_t>(j);
    Complex w = p.grid[sj];
    // d/dt [g_t o f_t^{-1}] at z = f(w), then * f'(w)/f(w)^2
    Complex zf = p.fs[sj];
    Complex xp = invert_map_at(plus.f, dfp, zf, w);
    Complex xm = invert_map_at(minus.f, dfm, zf, w);
    Complex dh = (eval(plus.g, xp) - eval(minus.g, xm)) / (2.0 * eps);
    Complex lhs = dh * p.dfs[sj] / (zf * zf);
    // d/dt [1/(f_t o g_t^{-1})] at z = g(w), then * g'(w)
    Complex zg = p.gs[sj];
    Complex yp = invert_map_at(plus.g, dgp, zg, w);
    Complex ym = invert_map_at(minus.g, dgm, zg, w);
    Complex dk =
        (1.0 / eval(plus.f, yp) - 1.0 / eval(minus.f, ym)) / (2.0 * eps);
    Complex rhs = dk * p.dgs[sj];
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

}  // namespace ctoda
