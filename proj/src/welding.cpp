#include "ctoda/welding.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ctoda {

namespace {

constexpr double kPi = std::numbers::pi;

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

std::vector<Complex> fourier_of(std::span<const Complex> samples) {
  std::vector<Complex> f(samples.begin(), samples.end());
  fft_pow2(f, -1);
  double inv = 1.0 / static_cast<double>(f.size());
  for (Complex& c : f) c *= inv;
  return f;
}

Complex mode_at(const std::vector<Complex>& fc, int k) {
  int m = static_cast<int>(fc.size());
  return fc[static_cast<size_t>(((k % m) + m) % m)];
}

}  // namespace

// ---------------------------------------------------------------------------
// CircleHomeo

CircleHomeo CircleHomeo::from_samples(int m, std::vector<Complex> gamma) {
  CircleHomeo h;
  h.m_ = m;
  h.gamma_ = std::move(gamma);
  h.finish(true);
  return h;
}

CircleHomeo CircleHomeo::from_maps(
    int m, const std::function<Complex(Complex)>& gamma,
    const std::function<Complex(Complex)>& gamma_inv) {
  CircleHomeo h;
  h.m_ = m;
  h.gamma_.resize(static_cast<size_t>(m));
  h.gamma_inv_.resize(static_cast<size_t>(m));
  std::vector<Complex> grid = circle_points(1.0, m);
  for (int j = 0; j < m; ++j) {
    h.gamma_[static_cast<size_t>(j)] = gamma(grid[static_cast<size_t>(j)]);
    h.gamma_inv_[static_cast<size_t>(j)] =
        gamma_inv(grid[static_cast<size_t>(j)]);
  }
  h.finish(false);
  return h;
}

CircleHomeo CircleHomeo::from_angle_perturbation(
    int m, const std::vector<std::pair<double, double>>& cs) {
  CircleHomeo h;
  h.m_ = m;
  h.gamma_.resize(static_cast<size_t>(m));
  for (int j = 0; j < m; ++j) {
    double th = 2.0 * kPi * j / m;
    double u = 0.0;
    for (size_t k = 0; k < cs.size(); ++k) {
      double kk = static_cast<double>(k + 1);
      u += cs[k].first * std::cos(kk * th) + cs[k].second * std::sin(kk * th);
    }
    h.gamma_[static_cast<size_t>(j)] =
        Complex(std::cos(th + u), std::sin(th + u));
  }
  h.finish(true);
  return h;
}

void CircleHomeo::finish(bool solve_inverse) {
  require(m_ >= 16 && (m_ & (m_ - 1)) == 0,
          "CircleHomeo: grid must be a power of two >= 16");
  const int m = m_;
  for (Complex& g : gamma_) {
    double r = std::abs(g);
    if (std::abs(r - 1.0) > 1e-12)
      throw std::invalid_argument("CircleHomeo: samples leave the unit circle");
    g /= r;
  }
  // lifted angles; strict monotonicity is the injectivity/orientation check
  std::vector<double> eta(static_cast<size_t>(m));
  eta[0] = std::arg(gamma_[0]);
  for (int j = 1; j < m; ++j) {
    double d = std::arg(gamma_[static_cast<size_t>(j)] /
                        gamma_[static_cast<size_t>(j - 1)]);
    if (!(d > 0.0))
      throw std::invalid_argument(
          "CircleHomeo: samples are not orientation-preserving injective");
    eta[static_cast<size_t>(j)] = eta[static_cast<size_t>(j - 1)] + d;
  }
  double closure =
      eta[0] + 2.0 * kPi -
      (eta[static_cast<size_t>(m - 1)] +
       std::arg(gamma_[0] / gamma_[static_cast<size_t>(m - 1)]));
  if (std::abs(closure) > 1e-9)
    throw std::invalid_argument("CircleHomeo: angle lift fails to close up");

  std::vector<Complex> u(static_cast<size_t>(m));
  for (int j = 0; j < m; ++j)
    u[static_cast<size_t>(j)] =
        Complex(eta[static_cast<size_t>(j)] - 2.0 * kPi * j / m, 0.0);
  u_modes_ = fourier_of(u);

  // quasisymmetry proxy at one grid step
  qs_bound_ = 1.0;
  for (int j = 0; j < m; ++j) {
    Complex a = gamma_[static_cast<size_t>((j + 1) % m)] -
                gamma_[static_cast<size_t>(j)];
    Complex b = gamma_[static_cast<size_t>(j)] -
                gamma_[static_cast<size_t>((j + m - 1) % m)];
    double ratio = std::abs(a) / std::abs(b);
    qs_bound_ = std::max({qs_bound_, ratio, 1.0 / ratio});
  }
  if (qs_bound_ > 100.0)
    throw std::invalid_argument("CircleHomeo: quasisymmetry proxy above 100");

  if (solve_inverse) {
    gamma_inv_.resize(static_cast<size_t>(m));
    double x = -u_modes_[0].real();  // rough start near theta - u(0)
    for (int j = 0; j < m; ++j) {
      double target = 2.0 * kPi * j / m;
      if (j > 0) x += 2.0 * kPi / m;
      for (int it = 0; it < 80; ++it) {
        double r = angle(x) - target;
        r -= 2.0 * kPi * std::round(r / (2.0 * kPi));
        if (std::abs(r) < 1e-14) break;
        x -= r / angle_deriv(x);
      }
      gamma_inv_[static_cast<size_t>(j)] = Complex(std::cos(x), std::sin(x));
    }
  }
  // round-trip integrity
  std::vector<Complex> grid = circle_points(1.0, m);
  for (int j = 0; j < m; ++j) {
    Complex back = apply(gamma_inv_[static_cast<size_t>(j)]);
    if (std::abs(back - grid[static_cast<size_t>(j)]) > 1e-10)
      throw std::runtime_error("CircleHomeo: gamma o gamma^{-1} != id on grid");
  }

  fc_gamma_ = fourier_of(gamma_);
  std::vector<Complex> recip(static_cast<size_t>(m));
  for (int j = 0; j < m; ++j)
    recip[static_cast<size_t>(j)] = 1.0 / gamma_inv_[static_cast<size_t>(j)];
  fc_inv_recip_ = fourier_of(recip);
}

Complex CircleHomeo::fourier(int k) const { return mode_at(fc_gamma_, k); }

Complex CircleHomeo::fourier_inv_recip(int k) const {
  return mode_at(fc_inv_recip_, k);
}

double CircleHomeo::angle(double theta) const {
  // u is real, so pair the +-k modes
  const int m = m_;
  double u = u_modes_[0].real();
  Complex e(std::cos(theta), std::sin(theta));
  Complex ek(1.0, 0.0);
  for (int k = 1; k <= m / 2; ++k) {
    ek *= e;
    Complex c = u_modes_[static_cast<size_t>(k)];
    if (k == m / 2) {
      u += (c * ek).real();  // Nyquist mode, self-conjugate on the grid
      break;
    }
    u += 2.0 * (c * ek).real();
  }
  return theta + u;
}

double CircleHomeo::angle_deriv(double theta) const {
  const int m = m_;
  double du = 0.0;
  Complex e(std::cos(theta), std::sin(theta));
  Complex ek(1.0, 0.0);
  for (int k = 1; k < m / 2; ++k) {
    ek *= e;
    Complex c = u_modes_[static_cast<size_t>(k)];
    du += 2.0 * (Complex(0.0, k) * c * ek).real();
  }
  return 1.0 + du;
}

Complex CircleHomeo::apply(Complex w) const {
  double eta = angle(std::arg(w));
  return Complex(std::cos(eta), std::sin(eta));
}

Complex CircleHomeo::apply_inv(Complex w) const {
  double target = std::arg(w);
  double x = target - u_modes_[0].real();
  for (int it = 0; it < 80; ++it) {
    double r = angle(x) - target;
    r -= 2.0 * kPi * std::round(r / (2.0 * kPi));
    if (std::abs(r) < 1e-14) break;
    x -= r / angle_deriv(x);
  }
  return Complex(std::cos(x), std::sin(x));
}

// ---------------------------------------------------------------------------
// Welding solver

WeldResult weld(const CircleHomeo& h, const WeldOptions& opts) {
  if (h.qs_bound() > opts.qs_limit)
    throw std::invalid_argument(
        "weld: quasisymmetry proxy outside the solver's convergence domain");
  const int m = h.m();
  const int B = m / 2 - 1;
  require(opts.order <= m / 8, "weld: output order too large for the grid");

  std::vector<Complex> grid = circle_points(1.0, m);
  std::vector<Complex> F = grid;  // start from the identity
  const std::vector<Complex>& gam = h.gamma();
  const std::vector<Complex>& gin = h.gamma_inv();

  std::vector<Complex> H(static_cast<size_t>(m)), E(static_cast<size_t>(m));
  std::vector<Complex> fhat, hhat, ehat;
  double defect = 1e300;
  int it = 0;
  std::vector<Complex> ghat_keep;

  for (it = 1; it <= opts.max_iters; ++it) {
    fhat = fourier_of(F);
    // H = F o gamma^{-1}, then G = (modes <= 1 of H)
    for (int j = 0; j < m; ++j) {
      Complex p = gin[static_cast<size_t>(j)];
      Complex acc(0.0);
      for (int k = B; k >= 1; --k) acc = acc * p + mode_at(fhat, k);
      H[static_cast<size_t>(j)] = acc * p;
    }
    hhat = fourier_of(H);
    // E = G o gamma with G-modes k in [-B, 1]
    for (int j = 0; j < m; ++j) {
      Complex p = gam[static_cast<size_t>(j)];
      Complex ip = 1.0 / p;
      // Horner for the negative tail
      Complex neg = mode_at(hhat, -B);
      for (int k = -B + 1; k <= -1; ++k) neg = neg * ip + mode_at(hhat, k);
      neg *= ip;
      E[static_cast<size_t>(j)] = neg + mode_at(hhat, 0) + mode_at(hhat, 1) * p;
    }
    defect = 0.0;
    for (int j = 0; j < m; ++j)
      defect = std::max(defect,
                        std::abs(E[static_cast<size_t>(j)] -
                                 F[static_cast<size_t>(j)]));
    ghat_keep = hhat;
    if (defect <= opts.tol) break;

    ehat = fourier_of(E);
    for (int k = 0; k < m; ++k) {
      // keep only modes 1..B of the update
      int kk = (k <= m / 2) ? k : k - m;
      if (kk < 1 || kk > B) ehat[static_cast<size_t>(k)] = Complex(0.0);
    }
    std::vector<Complex> Fnew = ehat;
    fft_pow2(Fnew, +1);
    for (int j = 0; j < m; ++j)
      F[static_cast<size_t>(j)] =
          (1.0 - opts.damping) * F[static_cast<size_t>(j)] +
          opts.damping * Fnew[static_cast<size_t>(j)];

    // renormalize a1 b = 1 (sign: Re(a1) >= 0, ties to Im(a1) > 0)
    Complex a1 = fourier_of(F)[1];
    Complex b = mode_at(hhat, 1);
    Complex r = std::sqrt(1.0 / (a1 * b));
    Complex ra = r * a1;
    if (ra.real() < 0.0 || (ra.real() == 0.0 && ra.imag() <= 0.0)) r = -r;
    for (Complex& v : F) v *= r;
  }

  fhat = fourier_of(F);
  ComplexSeries fs(Window(1, opts.order)), gs(Window(-opts.order, 1));
  for (int k = 1; k <= opts.order; ++k) fs.at(k) = mode_at(fhat, k);
  for (int k = -opts.order; k <= 1; ++k) gs.at(k) = mode_at(ghat_keep, k);

  WeldResult res;
  res.iters = it;
  res.defect = defect;
  res.converged = defect <= opts.tol;
  for (int k = opts.order + 1; k <= B; ++k) {
    res.truncation = std::max(res.truncation, std::abs(mode_at(fhat, k)));
    res.truncation = std::max(res.truncation, std::abs(mode_at(ghat_keep, -k)));
  }
  res.pair = normalize_pair(fs, gs, m);
  return res;
}

CircleHomeo compose_welding(const ConformalPair& p, double match_tol) {
  const int m = p.m;
  ComplexSeries dg = derivative(p.g);
  std::vector<Complex> gamma(static_cast<size_t>(m));
  double eta = 0.0;
  double worst = 0.0;
  for (int j = 0; j < m; ++j) {
    Complex target = p.fs[static_cast<size_t>(j)];
    if (j == 0) {
      // coarse scan for the best starting sample
      double best = 1e300;
      for (int k = 0; k < m; ++k) {
        double d = std::abs(p.gs[static_cast<size_t>(k)] - target);
        if (d < best) {
          best = d;
          eta = 2.0 * kPi * k / m;
        }
      }
    }
    double res = 1e300;
    for (int it = 0; it < 80; ++it) {
      Complex w(std::cos(eta), std::sin(eta));
      Complex r = eval(p.g, w) - target;
      res = std::abs(r);
      if (res < 1e-13) break;
      Complex d = Complex(0.0, 1.0) * w * eval(dg, w);
      double step = (std::conj(d) * r).real() / std::norm(d);
      if (!(std::abs(step) < 1.0)) step = (step > 0) ? 0.5 : -0.5;
      eta -= step;
    }
    worst = std::max(worst, res);
    gamma[static_cast<size_t>(j)] = Complex(std::cos(eta), std::sin(eta));
  }
  if (worst > match_tol)
    throw std::domain_error(
        "compose_welding: image curves of f and g do not coincide "
        "(pair is not in the circle-homeomorphism locus)");
  return CircleHomeo::from_samples(m, std::move(gamma));
}

// ---------------------------------------------------------------------------
// Wiegmann-Zabrodin slice

ConformalPair sigma_pair(const ComplexSeries& g, int m) {
  const int N = std::max(1, -g.lo());
  ComplexSeries h = flipped(g.conjugated());  // window [-1, N]
  require(std::abs(h.coeff(-1)) > 0.0, "sigma_pair: g has no pole coefficient");
  ComplexSeries f = reciprocal(h, -1, Window(1, N));
  return normalize_pair(f, g, m);
}

MomentSet harmonic_moments(const ComplexSeries& g, int m, int N) {
  ConformalPair sp = sigma_pair(g, m);  // validates g and supplies v0
  const ComplexSeries& gg = sp.g;       // rescaled copy of g
  std::vector<Complex> gs = to_samples(gg, m).values;
  std::vector<Complex> dgs = to_samples(derivative(gg), m).values;
  std::vector<Complex> grid = circle_points(1.0, m);

  MomentSet ms;
  ms.order = N;
  ms.source = "harmonic";
  ms.tc.assign(static_cast<size_t>(2 * N + 1), Complex(0.0));
  ms.vc.assign(static_cast<size_t>(2 * N + 1), Complex(0.0));

  std::vector<Complex> base(static_cast<size_t>(m));
  for (int j = 0; j < m; ++j) {
    size_t sj = static_cast<size_t>(j);
    base[sj] = std::conj(gs[sj]) * dgs[sj] * grid[sj];
  }
  Complex t0(0.0);
  for (const Complex& b : base) t0 += b;
  ms.tref(0) = t0 / static_cast<double>(m);
  ms.t0_alt = ms.t(0);

  std::vector<Complex> pw_neg(static_cast<size_t>(m)),
      pw_pos(static_cast<size_t>(m));
  for (int j = 0; j < m; ++j) {
    size_t sj = static_cast<size_t>(j);
    pw_neg[sj] = 1.0 / gs[sj];
    pw_pos[sj] = gs[sj];
  }
  for (int n = 1; n <= N; ++n) {
    Complex tn(0.0), vn(0.0);
    for (int j = 0; j < m; ++j) {
      size_t sj = static_cast<size_t>(j);
      tn += pw_neg[sj] * base[sj];
      vn += pw_pos[sj] * base[sj];
    }
    ms.tref(n) = tn / static_cast<double>(n * m);
    ms.vref(n) = vn / static_cast<double>(m);
    ms.tref(-n) = -std::conj(ms.t(n));
    ms.vref(-n) = -std::conj(ms.v(n));
    if (n < N) {
      for (int j = 0; j < m; ++j) {
        size_t sj = static_cast<size_t>(j);
        pw_neg[sj] /= gs[sj];
        pw_pos[sj] *= gs[sj];
      }
    }
  }
  ms.vref(0) = moments(sp, 1).v(0);  // contour form on the reflected pair
  return ms;
}

// ---------------------------------------------------------------------------
// Fourier-side moments

MomentSet fourier_moments_from_samples(std::span<const Complex> gamma,
                                       std::span<const Complex> gamma_inv,
                                       const ConformalPair& p, int N) {
  const int m = p.m;
  require(static_cast<int>(gamma.size()) == m &&
              static_cast<int>(gamma_inv.size()) == m,
          "fourier_moments: sample count mismatch");
  std::vector<Complex> fc = fourier_of(gamma);
  std::vector<Complex> recip(static_cast<size_t>(m));
  for (int j = 0; j < m; ++j)
    recip[static_cast<size_t>(j)] = 1.0 / gamma_inv[static_cast<size_t>(j)];
  std::vector<Complex> fc2 = fourier_of(recip);

  MomentSet ms;
  ms.order = N;
  ms.source = "fourier";
  ms.tc.assign(static_cast<size_t>(2 * N + 1), Complex(0.0));
  ms.vc.assign(static_cast<size_t>(2 * N + 1), Complex(0.0));
  ms.tref(0) = mode_at(fc, 1);
  ms.t0_alt = mode_at(fc2, -1);  // c_0; coincides with t_0 in exact data
  for (int n = 1; n <= N; ++n) {
    ms.tref(-n) = -mode_at(fc, 1 - n) / static_cast<double>(n);
    ms.vref(-n) = -mode_at(fc, n + 1);
    ms.tref(n) = mode_at(fc2, n - 1) / static_cast<double>(n);
    ms.vref(n) = mode_at(fc2, -n - 1);
  }
  // v0 = (1/2 pi i) oint [log(f/w) gamma/w^2 - log(g/w)/gamma^{-1}] dw
  //      - (1/2 pi i) oint_C (g^{-1}/f^{-1}) dz/z pulled back through g.
  std::vector<Complex> Lf = log_ratio_samples(p.f, p.fs, p.grid);
  std::vector<Complex> Lg = log_ratio_samples(p.g, p.gs, p.grid);
  Complex acc(0.0);
  for (int j = 0; j < m; ++j) {
    size_t sj = static_cast<size_t>(j);
    Complex w = p.grid[sj];
    acc += Lf[sj] * gamma[sj] / w - Lg[sj] * w * recip[sj] -
           w * w * p.dgs[sj] * recip[sj] / p.gs[sj];
  }
  ms.vref(0) = acc / static_cast<double>(m);
  return ms;
}

MomentSet fourier_moments(const CircleHomeo& h, const ConformalPair& p, int N,
                          double c0_tol) {
  MomentSet ms = fourier_moments_from_samples(h.gamma(), h.gamma_inv(), p, N);
  if (ms.t0_mismatch() > c0_tol)
    throw std::runtime_error(
        "fourier_moments: c_0 of 1/gamma^{-1} disagrees with t_0 of gamma "
        "(inconsistent homeomorphism data)");
  return ms;
}

Complex fourier_v0_heuristic(const CircleHomeo& h) {
  const int m = h.m();
  std::vector<Complex> grid = circle_points(1.0, m);
  Complex acc(0.0);
  for (int j = 0; j < m; ++j) {
    size_t sj = static_cast<size_t>(j);
    double theta = 2.0 * kPi * j / m;
    Complex w = grid[sj];
    Complex term = Complex(0.0, theta) *
                   (h.gamma()[sj] / (w * w) - 1.0 / h.gamma_inv()[sj]);
    acc += term * w;
  }
  return -acc / static_cast<double>(m);
}

// ---------------------------------------------------------------------------
// Fourier-side flows

std::vector<Complex> homeo_variation(const ConformalPair& p, int n) {
  const int m = p.m;
  std::vector<Complex> out(static_cast<size_t>(m));
  if (n == 0) {
    for (int j = 0; j < m; ++j) {
      size_t sj = static_cast<size_t>(j);
      out[sj] = p.grid[sj] * p.grid[sj] * p.dfs[sj] / p.fs[sj];
    }
    return out;
  }
  FaberPolys fp = faber(p.f, p.g, std::abs(n));
  const ComplexSeries& poly =
      (n > 0) ? fp.P[static_cast<size_t>(n)] : fp.Q[static_cast<size_t>(-n)];
  ComplexSeries dpoly = derivative(poly);
  for (int j = 0; j < m; ++j) {
    size_t sj = static_cast<size_t>(j);
    out[sj] = p.grid[sj] * p.grid[sj] * eval(dpoly, p.fs[sj]) * p.dfs[sj];
  }
  return out;
}

HomeoState homeo_state(const ConformalPair& p, const CircleHomeo& h) {
  require(h.m() == p.m, "homeo_state: grid mismatch");
  double worst = 0.0;
  for (int j = 0; j < p.m; ++j) {
    size_t sj = static_cast<size_t>(j);
    worst = std::max(worst,
                     std::abs(eval(p.g, h.gamma()[sj]) - p.fs[sj]));
  }
  if (worst > 1e-5)
    throw std::invalid_argument("homeo_state: gamma does not weld the pair");
  return HomeoState{p, h.gamma(), h.gamma_inv()};
}

std::pair<ComplexSeries, ComplexSeries> homeo_field(const HomeoState& st,
                                                    int n) {
  const ConformalPair& p = st.pair;
  const int m = p.m;
  const int N = p.order();
  const int K = N + 2;

  ComplexSeries df_series = derivative(p.f);

  // u(z) = P_n'(z) F(z)^2 / (F'(z) G'(z)) for the inverse pair
  // (F = f^{-1}, G = g^{-1}), evaluated at z = g(w):
  //   F(g(w)) = gamma^{-1}(w), F'(g(w)) = 1/f'(gamma^{-1}(w)),
  //   G'(g(w)) = 1/g'(w).
  std::vector<Complex> u(static_cast<size_t>(m));
  if (n == 0) {
    for (int j = 0; j < m; ++j) {
      size_t sj = static_cast<size_t>(j);
      Complex gi = st.gamma_inv[sj];
      u[sj] = gi * gi * eval(df_series, gi) * p.dgs[sj] / p.gs[sj];
    }
  } else {
    FaberPolys fp = faber(p.f, p.g, std::abs(n));
    const ComplexSeries& poly =
        (n > 0) ? fp.P[static_cast<size_t>(n)] : fp.Q[static_cast<size_t>(-n)];
    ComplexSeries dpoly = derivative(poly);
    for (int j = 0; j < m; ++j) {
      size_t sj = static_cast<size_t>(j);
      Complex gi = st.gamma_inv[sj];
      u[sj] = eval(dpoly, p.gs[sj]) * gi * gi * eval(df_series, gi) * p.dgs[sj];
    }
  }

  // Laurent modes around the curve C: u_k = (1/2 pi i) oint u(z) z^{-k-1} dz
  // pulled back through z = g(w).
  std::vector<Complex> modes(static_cast<size_t>(2 * K + 1), Complex(0.0));
  std::vector<Complex> invg(static_cast<size_t>(m));
  for (int j = 0; j < m; ++j)
    invg[static_cast<size_t>(j)] = 1.0 / p.gs[static_cast<size_t>(j)];
  for (int k = -K; k <= K; ++k) {
    Complex acc(0.0);
    for (int j = 0; j < m; ++j) {
      size_t sj = static_cast<size_t>(j);
      // z^{-k-1} at z = g(w)
      Complex zp = std::pow(p.gs[sj], -(k + 1));
      acc += u[sj] * zp * p.dgs[sj] * p.grid[sj];
    }
    modes[static_cast<size_t>(k + K)] = acc / static_cast<double>(m);
  }
  auto md = [&](int k) { return modes[static_cast<size_t>(k + K)]; };

  // delta f(w) = M_+(f(w)), delta g(w) = -M_-(g(w)) with
  // M_+(z) = u_1 z / 2 + sum_{k>=2} u_k z^k, M_-(z) = u_1 z / 2 + sum_{k<=0}.
  ComplexSeries mplus(Window(1, K)), mminus(Window(-K, 1));
  mplus.at(1) = 0.5 * md(1);
  mminus.at(1) = 0.5 * md(1);
  for (int k = 2; k <= K; ++k) mplus.at(k) = md(k);
  for (int k = -K; k <= 0; ++k) mminus.at(k) = md(k);

  std::vector<Complex> dfj(static_cast<size_t>(m)), dgj(static_cast<size_t>(m));
  for (int j = 0; j < m; ++j) {
    size_t sj = static_cast<size_t>(j);
    dfj[sj] = eval(mplus, p.fs[sj]);
    dgj[sj] = -eval(mminus, p.gs[sj]);
  }
  ComplexSeries df =
      from_samples(CircleSamples(m, std::move(dfj)), Window(1, N));
  ComplexSeries dg =
      from_samples(CircleSamples(m, std::move(dgj)), Window(-N, 1));
  return {df, dg};
}

namespace {

HomeoState advance(const HomeoState& st, const ComplexSeries& df,
                   const ComplexSeries& dg, double eps) {
  HomeoState out;
  out.pair = shifted_pair(st.pair, df, dg, Complex(eps));
  const int m = out.pair.m;
  out.gamma.resize(static_cast<size_t>(m));
  out.gamma_inv.resize(static_cast<size_t>(m));
  ComplexSeries dgs = derivative(out.pair.g);
  ComplexSeries dfs = derivative(out.pair.f);
  for (int j = 0; j < m; ++j) {
    size_t sj = static_cast<size_t>(j);
    out.gamma[sj] =
        invert_map_at(out.pair.g, dgs, out.pair.fs[sj], st.gamma[sj]);
    out.gamma_inv[sj] =
        invert_map_at(out.pair.f, dfs, out.pair.gs[sj], st.gamma_inv[sj]);
  }
  return out;
}

}  // namespace

HomeoState homeo_flow_step_along(
    const HomeoState& st,
    const std::function<std::pair<ComplexSeries, ComplexSeries>(
        const HomeoState&)>& field,
    double eps) {
  if (eps == 0.0) return st;
  auto [df1, dg1] = field(st);
  HomeoState half = advance(st, df1, dg1, eps / 2.0);
  auto [df2, dg2] = field(half);
  return advance(st, df2, dg2, eps);
}

HomeoState homeo_flow_step(const HomeoState& st, int n, double eps) {
  return homeo_flow_step_along(
      st, [n](const HomeoState& s) { return homeo_field(s, n); }, eps);
}

Complex log_tau_homeo(const HomeoState& st, const MomentSet& fm) {
  const int N = fm.order;
  const int m = st.pair.m;
  ComplexSeries phi(Window(-N, -1)), psi(Window(1, N));
  for (int n = 1; n <= N; ++n) {
    phi.at(-n) = fm.v(n) / static_cast<double>(n);
    psi.at(n) = fm.v(-n) / static_cast<double>(n);
  }
  ComplexSeries dphi = derivative(phi), dpsi = derivative(psi);
  Complex acc(0.0);
  for (int j = 0; j < m; ++j) {
    size_t sj = static_cast<size_t>(j);
    Complex w = st.pair.grid[sj];
    Complex t1 = (1.0 / st.gamma_inv[sj]) *
                 (w * eval(dphi, w) + 2.0 * eval(phi, w));
    Complex t2 = (st.gamma[sj] / (w * w)) *
                 (w * eval(dpsi, w) - 2.0 * eval(psi, w));
    acc += (t1 + t2) * w;
  }
  return 0.5 * fm.t(0) * fm.v(0) - 0.25 * fm.t(0) * fm.t(0) +
         acc / (4.0 * static_cast<double>(m));
}

Complex log_tau_homeo(const HomeoState& st) {
  MomentSet fm = fourier_moments_from_samples(st.gamma, st.gamma_inv, st.pair,
                                              st.pair.order());
  return log_tau_homeo(st, fm);
}

double check_fourier_duality(const HomeoState& st, int n, int m_idx,
                             double eps) {
  const int N = std::max({std::abs(n), std::abs(m_idx), 1});
  HomeoState plus = homeo_flow_step(st, n, eps);
  HomeoState minus = homeo_flow_step(st, n, -eps);
  MomentSet mp =
      fourier_moments_from_samples(plus.gamma, plus.gamma_inv, plus.pair, N);
  MomentSet mm =
      fourier_moments_from_samples(minus.gamma, minus.gamma_inv, minus.pair, N);
  Complex fd = (mp.t(m_idx) - mm.t(m_idx)) / (2.0 * eps);
  Complex expect = (n == m_idx) ? Complex(1.0) : Complex(0.0);
  return std::abs(fd - expect);
}

namespace {

Complex homeo_log_tau_at(const HomeoState& st) {
  MomentSet fm = fourier_moments_from_samples(st.gamma, st.gamma_inv, st.pair,
                                              st.pair.order());
  return log_tau_homeo(st, fm);
}

}  // namespace

double check_homeo_gradient(const HomeoState& st, int n, double eps) {
  HomeoState plus = homeo_flow_step(st, n, eps);
  HomeoState minus = homeo_flow_step(st, n, -eps);
  Complex fd = (homeo_log_tau_at(plus) - homeo_log_tau_at(minus)) / (2.0 * eps);
  MomentSet fm = fourier_moments_from_samples(st.gamma, st.gamma_inv, st.pair,
                                              std::max(std::abs(n), 1));
  return std::abs(fd - fm.v(n));
}

double check_homeo_hessian(const HomeoState& st, int m_idx, int n_idx,
                           double eps, const GrunskyTable& tbl) {
  auto second_diff = [&](const std::function<std::pair<ComplexSeries,
                                                       ComplexSeries>(
                             const HomeoState&)>& field) {
    HomeoState plus = homeo_flow_step_along(st, field, eps);
    HomeoState minus = homeo_flow_step_along(st, field, -eps);
    return (homeo_log_tau_at(plus) - 2.0 * homeo_log_tau_at(st) +
            homeo_log_tau_at(minus)) /
           (eps * eps);
  };
  Complex fd2;
  if (m_idx == n_idx) {
    fd2 = second_diff(
        [m_idx](const HomeoState& s) { return homeo_field(s, m_idx); });
  } else {
    auto combo = [m_idx, n_idx](double sign) {
      return [m_idx, n_idx, sign](const HomeoState& s) {
        auto [df1, dg1] = homeo_field(s, m_idx);
        auto [df2, dg2] = homeo_field(s, n_idx);
        return std::make_pair(df1 + sign * df2, dg1 + sign * dg2);
      };
    };
    fd2 = 0.25 * (second_diff(combo(+1.0)) - second_diff(combo(-1.0)));
  }
  Complex expect;
  if (m_idx != 0 && n_idx != 0)
    expect =
        -std::abs(static_cast<double>(m_idx) * n_idx) * tbl.b(m_idx, n_idx);
  else if (m_idx == 0 && n_idx == 0)
    expect = -2.0 * tbl.b(0, 0);
  else {
    int mm = (m_idx != 0) ? m_idx : n_idx;
    expect = std::abs(static_cast<double>(mm)) * tbl.b(mm, 0);
  }
  return std::abs(fd2 - expect);
}

double check_fourier_v_variation(const HomeoState& st, int n, int m_idx,
                                 double eps, const GrunskyTable& tbl) {
  const int N = std::max({std::abs(n), std::abs(m_idx), 1});
  HomeoState plus = homeo_flow_step(st, n, eps);
  HomeoState minus = homeo_flow_step(st, n, -eps);
  MomentSet mp =
      fourier_moments_from_samples(plus.gamma, plus.gamma_inv, plus.pair, N);
  MomentSet mm =
      fourier_moments_from_samples(minus.gamma, minus.gamma_inv, minus.pair, N);
  Complex fd = (mp.v(m_idx) - mm.v(m_idx)) / (2.0 * eps);
  Complex expect;
  if (n != 0)
    expect = -std::abs(static_cast<double>(m_idx) * n) * tbl.b(n, m_idx);
  else
    expect = std::abs(static_cast<double>(m_idx)) * tbl.b(0, m_idx);
  return std::abs(fd - expect);
}

LaxSetup homeo_lax(const HomeoState& base, int cmp_radius) {
  const int K = cmp_radius + 8;
  LaxSetup s;
  s.flow = [base](const ConformalPair&, int n, double eps) {
    return homeo_flow_step(base, n, eps).pair;
  };
  s.L = [K](const ConformalPair& p) {
    return invert_composition(p.g, Window(-K, 1));
  };
  s.Ltilde = [K](const ConformalPair& p) {
    return invert_composition(p.f, Window(1, K));
  };
  s.cmp_L = Window(-cmp_radius, 1);
  s.cmp_Ltilde = Window(1, cmp_radius);
  return s;
}

}  // namespace ctoda
