#include "ctoda/grunsky.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ctoda {

namespace {

constexpr double kPi = std::numbers::pi;

// In-place 2D FFT (sign -1) of a row-major M x M array, normalized by 1/M^2,
// so out[p][q] = coefficient of e^{i p theta} e^{i q phi}.
void fourier2d(std::vector<Complex>& a, int M) {
  std::vector<Complex> tmp(static_cast<size_t>(M));
  for (int r = 0; r < M; ++r) {
    std::copy_n(a.begin() + static_cast<long>(r) * M, M, tmp.begin());
    fft_pow2(tmp, -1);
    std::copy_n(tmp.begin(), M, a.begin() + static_cast<long>(r) * M);
  }
  for (int c = 0; c < M; ++c) {
    for (int r = 0; r < M; ++r) tmp[static_cast<size_t>(r)] = a[static_cast<size_t>(r) * M + c];
    fft_pow2(tmp, -1);
    double inv = 1.0 / (static_cast<double>(M) * M);
    for (int r = 0; r < M; ++r) a[static_cast<size_t>(r) * M + c] = tmp[static_cast<size_t>(r)] * inv;
  }
}

Complex mode(const std::vector<Complex>& a, int M, int p, int q) {
  int ip = ((p % M) + M) % M;
  int iq = ((q % M) + M) % M;
  return a[static_cast<size_t>(ip) * M + iq];
}

// Branch-continuous log over a torus of quotient values already divided by
// their limit (so values hover near 1).  Unwraps along row 0, then down each
// column; checks closure in both directions.
std::vector<Complex> torus_log(const std::vector<Complex>& q, int M) {
  std::vector<Complex> out(q.size());
  auto lg_step = [&](Complex val, double prev_im) {
    if (!(std::abs(val) > 0.0))
      throw std::domain_error(
          "grunsky: log argument vanishes on the sampling torus "
          "(radii outside univalence annulus)");
    double raw = std::arg(val);
    double k = std::round((prev_im - raw) / (2.0 * kPi));
    return Complex(std::log(std::abs(val)), raw + 2.0 * kPi * k);
  };
  out[0] = lg_step(q[0], 0.0);
  for (int k = 1; k < M; ++k)
    out[static_cast<size_t>(k)] = lg_step(q[static_cast<size_t>(k)],
                                          out[static_cast<size_t>(k - 1)].imag());
  // row-0 closure
  double closure = lg_step(q[0], out[static_cast<size_t>(M - 1)].imag()).imag() -
                   out[0].imag();
  if (std::abs(closure) > 1e-6)
    throw std::domain_error(
        "grunsky: log argument winds on the sampling torus "
        "(radii outside univalence annulus)");
  for (int c = 0; c < M; ++c) {
    for (int r = 1; r < M; ++r) {
      out[static_cast<size_t>(r) * M + c] =
          lg_step(q[static_cast<size_t>(r) * M + c],
                  out[static_cast<size_t>(r - 1) * M + c].imag());
    }
    double col_closure =
        lg_step(q[static_cast<size_t>(c)],
                out[static_cast<size_t>(M - 1) * M + c].imag())
            .imag() -
        out[static_cast<size_t>(c)].imag();
    if (std::abs(col_closure) > 1e-6)
      throw std::domain_error(
          "grunsky: log argument winds on the sampling torus "
          "(radii outside univalence annulus)");
  }
  return out;
}

}  // namespace

Complex GrunskyTable::b(int m, int n) const {
  int N = order;
  return entries[static_cast<size_t>(m + N) * (2 * N + 1) + (n + N)];
}

Complex& GrunskyTable::bref(int m, int n) {
  int N = order;
  return entries[static_cast<size_t>(m + N) * (2 * N + 1) + (n + N)];
}

GrunskyTable grunsky_table(const ComplexSeries& F, const ComplexSeries& G,
                           int N, const GrunskyOptions& opts) {
  if (N < 1) throw std::invalid_argument("grunsky_table: order must be >= 1");
  const int M = opts.grid;
  if (M < 4 * N)
    throw std::invalid_argument("grunsky_table: torus grid too small for order");
  Complex a1 = F.coeff(1);
  Complex beta = G.coeff(1);
  if (!(std::abs(a1) > 0.0) || !(std::abs(beta) > 0.0))
    throw std::invalid_argument("grunsky_table: degenerate leading coefficients");

  const double rz_out = opts.r_out[0] * opts.outer_scale;
  const double rzeta_out = opts.r_out[1] * opts.outer_scale;
  const double rz_in = opts.r_in[0] * opts.inner_scale;
  const double rzeta_in = opts.r_in[1] * opts.inner_scale;

  GrunskyTable tbl;
  tbl.order = N;
  tbl.entries.assign(static_cast<size_t>(2 * N + 1) * (2 * N + 1), Complex(0.0));

  std::vector<Complex> q(static_cast<size_t>(M) * M);

  // --- expansion 1: log[(G(z)-G(zeta))/(z-zeta)] on exterior radii ---
  {
    auto zs = circle_points(rz_out, M);
    auto zetas = circle_points(rzeta_out, M);
    auto Gz = eval(G, zs);
    auto Gzeta = eval(G, zetas);
    for (int j = 0; j < M; ++j)
      for (int k = 0; k < M; ++k)
        q[static_cast<size_t>(j) * M + k] =
            (Gz[static_cast<size_t>(j)] - Gzeta[static_cast<size_t>(k)]) /
            ((zs[static_cast<size_t>(j)] - zetas[static_cast<size_t>(k)]) * beta);
    auto L = torus_log(q, M);
    fourier2d(L, M);
    double rm = 1.0;
    for (int m = 1; m <= N; ++m) {
      rm *= rz_out;
      double rn = 1.0;
      for (int n = 1; n <= N; ++n) {
        rn *= rzeta_out;
        tbl.bref(m, n) = -mode(L, M, -m, -n) * rm * rn;
      }
    }
  }

  // --- expansion 2: log[(G(z)-F(zeta))/z], z exterior / zeta interior ---
  {
    auto zs = circle_points(rz_out, M);
    auto zetas = circle_points(rzeta_in, M);
    auto Gz = eval(G, zs);
    auto Fzeta = eval(F, zetas);
    for (int j = 0; j < M; ++j)
      for (int k = 0; k < M; ++k)
        q[static_cast<size_t>(j) * M + k] =
            (Gz[static_cast<size_t>(j)] - Fzeta[static_cast<size_t>(k)]) /
            (zs[static_cast<size_t>(j)] * beta);
    auto L = torus_log(q, M);
    fourier2d(L, M);
    double rm = 1.0;
    for (int m = 1; m <= N; ++m) {
      rm *= rz_out;
      double rn = 1.0;
      for (int n = 0; n <= N; ++n) {
        tbl.bref(m, -n) = -mode(L, M, -m, n) * rm / rn;
        rn *= rzeta_in;
      }
    }
  }

  // --- expansion 3: log[(F(z)-F(zeta))/(z-zeta)] on interior radii ---
  {
    auto zs = circle_points(rz_in, M);
    auto zetas = circle_points(rzeta_in, M);
    auto Fz = eval(F, zs);
    auto Fzeta = eval(F, zetas);
    for (int j = 0; j < M; ++j)
      for (int k = 0; k < M; ++k)
        q[static_cast<size_t>(j) * M + k] =
            (Fz[static_cast<size_t>(j)] - Fzeta[static_cast<size_t>(k)]) /
            ((zs[static_cast<size_t>(j)] - zetas[static_cast<size_t>(k)]) * a1);
    auto L = torus_log(q, M);
    fourier2d(L, M);
    double rm = 1.0;
    for (int m = 0; m <= N; ++m) {
      double rn = 1.0;
      for (int n = 0; n <= N; ++n) {
        if (m != 0 || n != 0) tbl.bref(-m, -n) = -mode(L, M, m, n) / (rm * rn);
        rn *= rzeta_in;
      }
      rm *= rz_in;
    }
    tbl.bref(0, 0) = std::log(beta);
  }

  // --- row/column 0 cross-check against the single-variable expansions ---
  {
    ComplexSeries lrG = log_ratio(G, 1, Window(-N, 0));
    ComplexSeries lrF = log_ratio(F, 1, Window(0, N));
    for (int m = 1; m <= N; ++m) {
      Complex sv_g = -lrG.coeff(-m);  // b_{0,m} = b_{m,0}
      Complex sv_f = -lrF.coeff(m);   // b_{0,-m}
      tbl.axis_mismatch = std::max(tbl.axis_mismatch, std::abs(sv_g - tbl.b(m, 0)));
      tbl.axis_mismatch = std::max(tbl.axis_mismatch, std::abs(sv_f - tbl.b(0, -m)));
      tbl.axis_mismatch = std::max(tbl.axis_mismatch, std::abs(sv_f - tbl.b(-m, 0)));
    }
    if (tbl.axis_mismatch <= opts.axis_tol) {
      for (int m = 1; m <= N; ++m) {
        Complex sv_g = -lrG.coeff(-m);
        Complex sv_f = -lrF.coeff(m);
        tbl.bref(m, 0) = 0.5 * (tbl.b(m, 0) + sv_g);
        Complex avg = (tbl.b(0, -m) + tbl.b(-m, 0) + 2.0 * sv_f) * 0.25;
        tbl.bref(0, -m) = avg;
        tbl.bref(-m, 0) = avg;
      }
    } else {
      tbl.axis_consistent = false;
    }
  }

  // --- symmetry: measure, then enforce on the computed blocks ---
  for (int m = 1; m <= N; ++m)
    for (int n = m + 1; n <= N; ++n) {
      tbl.asymmetry = std::max(tbl.asymmetry, std::abs(tbl.b(m, n) - tbl.b(n, m)));
      Complex avg = 0.5 * (tbl.b(m, n) + tbl.b(n, m));
      tbl.bref(m, n) = avg;
      tbl.bref(n, m) = avg;
      tbl.asymmetry =
          std::max(tbl.asymmetry, std::abs(tbl.b(-m, -n) - tbl.b(-n, -m)));
      Complex avg2 = 0.5 * (tbl.b(-m, -n) + tbl.b(-n, -m));
      tbl.bref(-m, -n) = avg2;
      tbl.bref(-n, -m) = avg2;
    }

  // --- remaining block by symmetry: b_{i,j} := b_{j,i} for i <= 0, j >= 1 ---
  // (The G-F expansion determines b_{j,i} there; the F-G block is its
  // transpose.  Identity 5 of the Faber expansions pins this down: the
  // identity pair needs b_{-n,n} = b_{n,-n} = 1/n.)
  for (int i = 0; i >= -N; --i)
    for (int j = 1; j <= N; ++j) tbl.bref(i, j) = tbl.b(j, i);

  return tbl;
}

FaberPolys faber(const ComplexSeries& F, const ComplexSeries& G, int N) {
  if (!(std::abs(F.coeff(1)) > 0.0) || !(std::abs(G.coeff(1)) > 0.0))
    throw std::invalid_argument("faber: degenerate leading coefficients");
  int guard = std::max(8, N);
  int K = N + guard;
  ComplexSeries ginv = invert_composition(G, Window(-K, 1));
  ComplexSeries finv = invert_composition(F, Window(1, K));
  ComplexSeries finv_rec = reciprocal(finv, 1, Window(-1, K));

  FaberPolys fp;
  fp.P.reserve(static_cast<size_t>(N + 1));
  fp.Q.reserve(static_cast<size_t>(N + 1));
  fp.P.push_back(ComplexSeries::constant(1.0));
  fp.Q.push_back(ComplexSeries::constant(1.0));
  for (int n = 1; n <= N; ++n) {
    ComplexSeries gp = pow_int(ginv, n, 1, Window(-K, n));
    fp.P.push_back(truncated(project(gp, Part::NonNegative), Window(0, n)));
    ComplexSeries fq = pow_int(finv_rec, n, -1, Window(-n, K));
    fp.Q.push_back(truncated(project(fq, Part::NonPositive), Window(-n, 0)));
  }
  return fp;
}

FaberExpansionReport verify_faber_expansions(const ComplexSeries& F,
                                             const ComplexSeries& G, int N,
                                             const GrunskyOptions& opts) {
  GrunskyTable tbl = grunsky_table(F, G, N, opts);
  FaberPolys fp = faber(F, G, N);
  Complex a1 = F.coeff(1);
  Complex beta = G.coeff(1);

  FaberExpansionReport rep;

  {  // identity 1: log(G(z)/z)
    ComplexSeries lhs = log_ratio(G, 1, Window(-N, 0));
    ComplexSeries rhs(Window(-N, 0));
    rhs.at(0) = std::log(beta);
    for (int m = 1; m <= N; ++m) rhs.at(-m) = -tbl.b(0, m);
    rep.log_g = (lhs - rhs).max_abs();
  }
  {  // identity 2: log(F(z)/z)
    ComplexSeries lhs = log_ratio(F, 1, Window(0, N));
    ComplexSeries rhs(Window(0, N));
    rhs.at(0) = std::log(a1);
    for (int m = 1; m <= N; ++m) rhs.at(m) = -tbl.b(0, -m);
    rep.log_f = (lhs - rhs).max_abs();
  }
  for (int n = 1; n <= N; ++n) {
    {  // identity 3: P_n(G(z)) = z^n + n sum_m b_{n,m} z^-m
      ComplexSeries lhs = compose(fp.P[static_cast<size_t>(n)], G, Window(-N, n));
      ComplexSeries rhs(Window(-N, n));
      rhs.at(n) = 1.0;
      for (int m = 1; m <= N; ++m) rhs.at(-m) = static_cast<double>(n) * tbl.b(n, m);
      rep.p_of_g = std::max(rep.p_of_g, (lhs - rhs).max_abs());
    }
    {  // identity 4: P_n(F(z)) = n b_{n,0} + n sum_m b_{n,-m} z^m
      ComplexSeries lhs = compose(fp.P[static_cast<size_t>(n)], F, Window(0, N));
      ComplexSeries rhs(Window(0, N));
      rhs.at(0) = static_cast<double>(n) * tbl.b(n, 0);
      for (int m = 1; m <= N; ++m)
        rhs.at(m) = static_cast<double>(n) * tbl.b(n, -m);
      rep.p_of_f = std::max(rep.p_of_f, (lhs - rhs).max_abs());
    }
    {  // identity 5: Q_n(G(z)) = -n b_{-n,0} + n sum_m b_{-n,m} z^-m
      ComplexSeries lhs = compose(fp.Q[static_cast<size_t>(n)], G, Window(-N, 0));
      ComplexSeries rhs(Window(-N, 0));
      rhs.at(0) = -static_cast<double>(n) * tbl.b(-n, 0);
      for (int m = 1; m <= N; ++m)
        rhs.at(-m) = static_cast<double>(n) * tbl.b(-n, m);
      rep.q_of_g = std::max(rep.q_of_g, (lhs - rhs).max_abs());
    }
    {  // identity 6: Q_n(F(z)) = z^-n + n sum_m b_{-n,-m} z^m
      ComplexSeries lhs = compose(fp.Q[static_cast<size_t>(n)], F, Window(-n, N));
      ComplexSeries rhs(Window(-n, N));
      rhs.at(-n) = 1.0;
      for (int m = 1; m <= N; ++m)
        rhs.at(m) = static_cast<double>(n) * tbl.b(-n, -m);
      rep.q_of_f = std::max(rep.q_of_f, (lhs - rhs).max_abs());
    }
  }
  rep.max_residual = std::max({rep.log_g, rep.log_f, rep.p_of_g, rep.p_of_f,
                               rep.q_of_g, rep.q_of_f});
  return rep;
}

}  // namespace ctoda
