#include "ctoda/series.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace ctoda {

namespace {

constexpr double kPi = std::numbers::pi;

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

ComplexSeries::ComplexSeries(Window w) : lo_(w.lo) {
  require(w.valid(), "ComplexSeries: empty window");
  coeffs_.assign(static_cast<size_t>(w.span()), Complex(0.0));
}

ComplexSeries::ComplexSeries(Window w, std::vector<Complex> coeffs)
    : lo_(w.lo), coeffs_(std::move(coeffs)) {
  require(w.valid(), "ComplexSeries: empty window");
  require(static_cast<int>(coeffs_.size()) == w.span(),
          "ComplexSeries: coefficient count does not match window");
}

ComplexSeries ComplexSeries::monomial(int k, Complex c) {
  ComplexSeries s((Window(k, k)));
  s.at(k) = c;
  return s;
}

ComplexSeries ComplexSeries::constant(Complex c) { return monomial(0, c); }

Complex& ComplexSeries::at(int k) {
  require(window().contains(k), "ComplexSeries::at: exponent outside window");
  return coeffs_[static_cast<size_t>(k - lo_)];
}

bool ComplexSeries::support(int& lo_nz, int& hi_nz, double tol) const {
  int l = lo(), h = hi();
  while (l <= h && std::abs(coeff(l)) <= tol) ++l;
  while (h >= l && std::abs(coeff(h)) <= tol) --h;
  if (l > h) return false;
  lo_nz = l;
  hi_nz = h;
  return true;
}

double ComplexSeries::max_abs() const {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

ComplexSeries ComplexSeries::conjugated() const {
  ComplexSeries r = *this;
  for (auto& c : r.coeffs_) c = std::conj(c);
  return r;
}

std::string ComplexSeries::str() const {
  std::ostringstream os;
  os << "[" << lo() << "," << hi() << "]:";
  for (int k = lo(); k <= hi(); ++k) {
    Complex c = coeff(k);
    if (std::abs(c) == 0.0) continue;
    os << " (" << c.real() << (c.imag() < 0 ? "" : "+") << c.imag() << "i)w^"
       << k;
  }
  return os.str();
}

ComplexSeries operator+(const ComplexSeries& a, const ComplexSeries& b) {
  Window w(std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
  ComplexSeries r(w);
  for (int k = w.lo; k <= w.hi; ++k) r.at(k) = a.coeff(k) + b.coeff(k);
  return r;
}

ComplexSeries operator-(const ComplexSeries& a, const ComplexSeries& b) {
  Window w(std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
  ComplexSeries r(w);
  for (int k = w.lo; k <= w.hi; ++k) r.at(k) = a.coeff(k) - b.coeff(k);
  return r;
}

ComplexSeries operator*(Complex s, const ComplexSeries& a) {
  ComplexSeries r = a;
  for (int k = r.lo(); k <= r.hi(); ++k) r.at(k) *= s;
  return r;
}

ComplexSeries operator*(double s, const ComplexSeries& a) {
  return Complex(s) * a;
}

ComplexSeries operator-(const ComplexSeries& a) { return Complex(-1.0) * a; }

ComplexSeries truncated(const ComplexSeries& s, Window w) {
  require(w.valid(), "truncated: empty window");
  ComplexSeries r(w);
  for (int k = w.lo; k <= w.hi; ++k) r.at(k) = s.coeff(k);
  return r;
}

ComplexSeries trimmed(const ComplexSeries& s, double tol) {
  int l, h;
  if (!s.support(l, h, tol)) return ComplexSeries::constant(0.0);
  return truncated(s, Window(l, h));
}

ComplexSeries mul(const ComplexSeries& a, const ComplexSeries& b, Window w) {
  require(w.valid(), "mul: empty window");
  ComplexSeries r(w);
  for (int i = a.lo(); i <= a.hi(); ++i) {
    Complex ai = a.coeff(i);
    if (ai == Complex(0.0)) continue;
    int jlo = std::max(b.lo(), w.lo - i);
    int jhi = std::min(b.hi(), w.hi - i);
    for (int j = jlo; j <= jhi; ++j) r.at(i + j) += ai * b.coeff(j);
  }
  return r;
}

ComplexSeries mul(const ComplexSeries& a, const ComplexSeries& b) {
  return mul(a, b, Window(a.lo() + b.lo(), a.hi() + b.hi()));
}

ComplexSeries derivative(const ComplexSeries& s) {
  Window w(s.lo() - 1, s.hi() - 1);
  ComplexSeries r(w);
  for (int k = s.lo(); k <= s.hi(); ++k)
    r.at(k - 1) = static_cast<double>(k) * s.coeff(k);
  return r;
}

ComplexSeries project(const ComplexSeries& s, Part part) {
  ComplexSeries r(s.window());
  for (int k = s.lo(); k <= s.hi(); ++k) {
    bool keep = false;
    switch (part) {
      case Part::Positive: keep = k > 0; break;
      case Part::Negative: keep = k < 0; break;
      case Part::Zero: keep = k == 0; break;
      case Part::NonNegative: keep = k >= 0; break;
      case Part::NonPositive: keep = k <= 0; break;
    }
    if (keep) r.at(k) = s.coeff(k);
  }
  return r;
}

ComplexSeries flipped(const ComplexSeries& s) {
  Window w(-s.hi(), -s.lo());
  ComplexSeries r(w);
  for (int k = s.lo(); k <= s.hi(); ++k) r.at(-k) = s.coeff(k);
  return r;
}

namespace {

// Orientation of the one-sided tail of a series around its leading exponent d.
// +1: support in [d, ...] (expansion at 0); -1: support in [..., d].
int leading_orientation(const ComplexSeries& s, int d) {
  int l, h;
  require(s.support(l, h), "series is identically zero");
  require(std::abs(s.coeff(d)) > 0.0, "leading coefficient vanishes");
  if (d == l) return +1;
  if (d == h) return -1;
  throw std::invalid_argument("leading exponent is interior to the support");
}

}  // namespace

ComplexSeries reciprocal(const ComplexSeries& s, int d, Window window) {
  require(window.valid(), "reciprocal: empty window");
  int orient = leading_orientation(s, d);
  Complex cd = s.coeff(d);
  // u = s/(cd w^d) - 1, supported strictly on the far side of 0.
  Window uw = orient > 0 ? Window(1, std::max(1, s.hi() - d))
                         : Window(std::min(-1, s.lo() - d), -1);
  ComplexSeries u(uw);
  for (int k = s.lo(); k <= s.hi(); ++k) {
    if (k == d) continue;
    if (uw.contains(k - d)) u.at(k - d) = s.coeff(k) / cd;
  }
  // 1/(1+u) = sum (-u)^k, truncated; the shifted window bounds the order.
  Window gw = orient > 0 ? Window(0, std::max(1, window.hi + d))
                         : Window(std::min(-1, window.lo + d), 0);
  int order = orient > 0 ? gw.hi : -gw.lo;
  ComplexSeries geo = ComplexSeries::constant(1.0);
  ComplexSeries term = ComplexSeries::constant(1.0);
  for (int k = 1; k <= order; ++k) {
    term = mul(term, -1.0 * u, gw);
    geo = geo + term;
  }
  // result = w^{-d}/cd * geo
  ComplexSeries r(window);
  for (int k = gw.lo; k <= gw.hi; ++k) {
    int e = k - d;
    if (window.contains(e)) r.at(e) = geo.coeff(k) / cd;
  }
  return r;
}

ComplexSeries pow_int(const ComplexSeries& s, int n, int d, Window window) {
  require(window.valid(), "pow_int: empty window");
  if (n == 0) return truncated(ComplexSeries::constant(1.0), window);
  if (n < 0) {
    ComplexSeries inv =
        reciprocal(s, d, Window(window.lo - (-n - 1) * std::abs(d) - 2,
                                window.hi + (-n - 1) * std::abs(d) + 2));
    return pow_int(inv, -n, -d, window);
  }
  // Positive powers: widen the working window so graded products stay exact
  // for one-sided series, then truncate.
  Window work(std::min(window.lo, std::min(s.lo() * n, s.lo())) - 1,
              std::max(window.hi, std::max(s.hi() * n, s.hi())) + 1);
  ComplexSeries acc = truncated(s, work);
  for (int k = 1; k < n; ++k) acc = mul(acc, s, work);
  return truncated(acc, window);
}

ComplexSeries pow_int(const ComplexSeries& s, int n, Window window) {
  int l, h;
  require(s.support(l, h), "pow_int: zero series");
  int d = (std::abs(s.coeff(l)) >= std::abs(s.coeff(h))) ? l : h;
  return pow_int(s, n, d, window);
}

namespace {

ComplexSeries compose_by_sampling(const ComplexSeries& outer,
                                  const ComplexSeries& inner, Window window) {
  int need = 4 * std::max({std::abs(window.lo), std::abs(window.hi),
                           std::abs(inner.lo()), std::abs(inner.hi()), 8});
  int m = round_up_pow2(need);
  CircleSamples in = to_samples(inner, m);
  if (outer.lo() < 0) {
    for (const Complex& v : in.values)
      if (std::abs(v) < 1e-9)
        throw std::domain_error(
            "compose: inner samples leave the annulus of validity of outer");
  }
  std::vector<Complex> vals = eval(outer, in.values);
  return from_samples(CircleSamples(m, std::move(vals)), window);
}

}  // namespace

ComplexSeries compose(const ComplexSeries& outer, const ComplexSeries& inner,
                      Window window) {
  require(window.valid(), "compose: empty window");
  int l, h;
  if (!inner.support(l, h)) {
    // inner == 0: only outer's constant term survives.
    require(outer.lo() >= 0, "compose: outer has a pole at inner == 0");
    return truncated(ComplexSeries::constant(outer.coeff(0)), window);
  }
  bool at_zero = (l == 1 && std::abs(inner.coeff(1)) > 0.0);
  bool at_inf = (h == 1 && std::abs(inner.coeff(1)) > 0.0 && l < 1);
  if (!at_zero && !at_inf) return compose_by_sampling(outer, inner, window);

  // Graded coefficient path.  Work windows widened so every truncated product
  // keeps the coefficients inside `window` exact: the negative-exponent
  // Horner drifts one step down per factor (needs upper room ~|outer.lo|)
  // and an expansion-at-infinity inner drifts the positive Horner down
  // (needs lower room ~outer.hi).
  int span = window.span() + std::abs(window.lo) + std::abs(window.hi) +
             std::max(std::abs(outer.lo()), std::abs(outer.hi())) + 2;
  Window work(window.lo - span, window.hi + span);

  ComplexSeries pos_part = ComplexSeries::constant(0.0);
  // Horner over outer's nonnegative exponents (coeff() is zero off-window).
  for (int k = outer.hi(); k >= 0; --k) {
    pos_part = mul(pos_part, inner, work);
    pos_part = pos_part + ComplexSeries::constant(outer.coeff(k));
  }
  ComplexSeries result = pos_part;
  if (outer.lo() < 0) {
    ComplexSeries rec = reciprocal(inner, 1, work);
    // Horner: ((o_{lo} * rec + o_{lo+1}) * rec + ...) * rec for k = lo..-1
    ComplexSeries neg_part = ComplexSeries::constant(outer.coeff(outer.lo()));
    for (int k = outer.lo() + 1; k <= -1; ++k) {
      neg_part = mul(neg_part, rec, work);
      neg_part = neg_part + ComplexSeries::constant(outer.coeff(k));
    }
    neg_part = mul(neg_part, rec, work);
    result = result + neg_part;
  }
  return truncated(result, window);
}

namespace {

// Newton iteration for the inverse of s = c1 w + c2 w^2 + ... on [1, K].
// Conjugated by w -> c1 w so the iteration runs at near-identity scale:
// shat(u) = s(u)/c1 has leading coefficient 1, rhat = shat^{-1}, and
// s^{-1}(w) = rhat(w/c1).
ComplexSeries invert_power_series(const ComplexSeries& s, int K) {
  Complex c1 = s.coeff(1);
  Window w(1, K);
  Window work(0, K + 1);
  ComplexSeries shat = (1.0 / c1) * truncated(s, Window(1, std::max(s.hi(), K)));
  ComplexSeries r = ComplexSeries::monomial(1, 1.0);
  ComplexSeries ds = derivative(shat);
  int steps = 1;
  while ((1 << steps) < K + 1) ++steps;
  for (int it = 0; it <= steps; ++it) {
    ComplexSeries sr = compose(shat, r, work);       // shat(r(w))
    ComplexSeries dsr = compose(ds, r, work);        // shat'(r(w))
    ComplexSeries err = sr - ComplexSeries::monomial(1, 1.0);
    ComplexSeries corr = mul(err, reciprocal(dsr, 0, work), work);
    r = truncated(r - corr, w);
  }
  ComplexSeries out(w);
  Complex scale(1.0);
  for (int k = 1; k <= K; ++k) {
    scale /= c1;
    out.at(k) = r.coeff(k) * scale;
  }
  return out;
}

}  // namespace

ComplexSeries invert_composition(const ComplexSeries& s, Window window) {
  require(window.valid(), "invert_composition: empty window");
  int l, h;
  require(s.support(l, h), "invert_composition: zero series");
  require(std::abs(s.coeff(1)) > 0.0,
          "invert_composition: leading coefficient c1 vanishes");
  if (l == 1) {
    // expansion at 0 (a pure monomial c1 w inverts to w/c1 in any window)
    if (window.hi < 1) throw std::invalid_argument(
        "invert_composition: window cannot hold a valuation-1 result");
    return truncated(
        invert_power_series(truncated(s, Window(1, std::max(s.hi(), window.hi))),
                            window.hi),
        window);
  }
  require(h == 1, "invert_composition: series has valuation != 1");
  // Expansion at infinity: s = c1 w + c0 + c_{-1}/w + ...
  // Conjugate by the inversion map: H(u) = 1/s(1/u) is a valuation-1 power
  // series; invert it, then map back: s^{-1}(w) = 1 / H^{-1}(1/w).
  int K = std::max(2, std::max(-window.lo, s.hi() - s.lo())) + 2;
  ComplexSeries fl = flipped(s);                       // support [-1, K-ish]
  ComplexSeries H = reciprocal(fl, -1, Window(1, K + 1));
  ComplexSeries Hinv = invert_power_series(H, K + 1);
  ComplexSeries flH = flipped(Hinv);                   // support [-(K+1), -1]
  return reciprocal(flH, -1, window);
}

ComplexSeries invert_composition(const ComplexSeries& s) {
  return invert_composition(s, s.window());
}

ComplexSeries log_ratio(const ComplexSeries& s, int d, Window window) {
  require(window.valid(), "log_ratio: empty window");
  int orient = leading_orientation(s, d);
  Complex cd = s.coeff(d);
  Window uw = orient > 0 ? Window(1, std::max(1, s.hi() - d))
                         : Window(std::min(-1, s.lo() - d), -1);
  ComplexSeries u(uw);
  for (int k = s.lo(); k <= s.hi(); ++k) {
    if (k == d) continue;
    if (uw.contains(k - d)) u.at(k - d) = s.coeff(k) / cd;
  }
  Window gw = orient > 0 ? Window(0, std::max(1, window.hi))
                         : Window(std::min(-1, window.lo), 0);
  int order = orient > 0 ? gw.hi : -gw.lo;
  // log(1+u) = sum_{k>=1} (-1)^{k+1} u^k / k
  ComplexSeries acc = ComplexSeries::constant(std::log(cd));
  ComplexSeries term = ComplexSeries::constant(1.0);
  for (int k = 1; k <= order; ++k) {
    term = mul(term, u, gw);
    double sign = (k % 2 == 1) ? 1.0 : -1.0;
    acc = acc + (sign / k) * term;
  }
  return truncated(acc, window);
}

ComplexSeries log_ratio(const ComplexSeries& s, int d) {
  int orient = leading_orientation(s, d);
  Window w = orient > 0 ? Window(0, std::max(1, s.hi() - d))
                        : Window(std::min(-1, s.lo() - d), 0);
  return log_ratio(s, d, w);
}

ComplexSeries exp_series(const ComplexSeries& s, Window window) {
  require(window.valid(), "exp_series: empty window");
  Complex c0 = s.coeff(0);
  ComplexSeries u = s - ComplexSeries::constant(c0);
  int l, h;
  if (!u.support(l, h)) {
    return truncated(ComplexSeries::constant(std::exp(c0)), window);
  }
  require(l > 0 || h < 0, "exp_series: nonconstant part must be one-sided");
  int order = (l > 0) ? std::max(1, window.hi) : std::max(1, -window.lo);
  Window gw = (l > 0) ? Window(0, std::max(1, window.hi))
                      : Window(std::min(-1, window.lo), 0);
  ComplexSeries acc = ComplexSeries::constant(1.0);
  ComplexSeries term = ComplexSeries::constant(1.0);
  double fact = 1.0;
  for (int k = 1; k <= order; ++k) {
    term = mul(term, u, gw);
    fact *= k;
    acc = acc + (1.0 / fact) * term;
  }
  return truncated(std::exp(c0) * acc, window);
}

Complex eval(const ComplexSeries& s, Complex z) {
  // Horner over nonnegative exponents, then over negative ones in 1/z.
  Complex pos(0.0);
  if (s.hi() >= 0)
    for (int k = s.hi(); k >= 0; --k) pos = pos * z + s.coeff(k);
  if (s.lo() >= 0) return pos;
  Complex zi = 1.0 / z;
  Complex neg = s.coeff(s.lo());
  for (int k = s.lo() + 1; k <= -1; ++k) neg = neg * zi + s.coeff(k);
  neg = neg * zi;
  return pos + neg;
}

std::vector<Complex> eval(const ComplexSeries& s, std::span<const Complex> pts) {
  std::vector<Complex> out(pts.size());
  for (size_t i = 0; i < pts.size(); ++i) out[i] = eval(s, pts[i]);
  return out;
}

CircleSamples::CircleSamples(int grid, std::vector<Complex> v)
    : m(grid), values(std::move(v)) {
  if (m <= 0 || (m & (m - 1)) != 0)
    throw std::invalid_argument("CircleSamples: grid size must be a power of two");
  if (static_cast<int>(values.size()) != m)
    throw std::invalid_argument("CircleSamples: value count != m");
}

void fft_pow2(std::vector<Complex>& x, int sign) {
  const size_t n = x.size();
  if (n == 0 || (n & (n - 1)) != 0)
    throw std::invalid_argument("fft_pow2: size must be a power of two");
  // bit reversal
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(x[i], x[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    double ang = sign * 2.0 * kPi / static_cast<double>(len);
    Complex wl(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      Complex w(1.0);
      for (size_t k = 0; k < len / 2; ++k) {
        Complex u = x[i + k];
        Complex v = x[i + k + len / 2] * w;
        x[i + k] = u + v;
        x[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

int round_up_pow2(int n) {
  int m = 1;
  while (m < n) m <<= 1;
  return m;
}

std::vector<Complex> circle_points(double radius, int m) {
  std::vector<Complex> pts(static_cast<size_t>(m));
  for (int j = 0; j < m; ++j) {
    double th = 2.0 * kPi * j / m;
    pts[static_cast<size_t>(j)] = radius * Complex(std::cos(th), std::sin(th));
  }
  return pts;
}

CircleSamples to_samples(const ComplexSeries& s, int m) {
  if (m <= 0 || (m & (m - 1)) != 0)
    throw std::invalid_argument("to_samples: m must be a power of two");
  if (s.window().span() > m)
    throw std::invalid_argument("to_samples: window span exceeds grid (aliasing)");
  std::vector<Complex> a(static_cast<size_t>(m), Complex(0.0));
  for (int k = s.lo(); k <= s.hi(); ++k) {
    int idx = ((k % m) + m) % m;
    a[static_cast<size_t>(idx)] += s.coeff(k);
  }
  fft_pow2(a, +1);  // v_j = sum_k c_k exp(+2 pi i jk/m)
  return CircleSamples(m, std::move(a));
}

ComplexSeries from_samples(const CircleSamples& v, Window window) {
  if (!window.valid()) throw std::invalid_argument("from_samples: empty window");
  if (window.span() > v.m / 2)
    throw std::invalid_argument("from_samples: window span > m/2 (aliasing)");
  std::vector<Complex> a = v.values;
  fft_pow2(a, -1);
  ComplexSeries s(window);
  double inv_m = 1.0 / v.m;
  for (int k = window.lo; k <= window.hi; ++k) {
    int idx = ((k % v.m) + v.m) % v.m;
    s.at(k) = a[static_cast<size_t>(idx)] * inv_m;
  }
  return s;
}

size_t smallest_term_cutoff(std::span<const double> mags) {
  if (mags.empty()) return 0;
  size_t best = 0;
  for (size_t i = 1; i < mags.size(); ++i)
    if (mags[i] < mags[best]) best = i;
  return best + 1;
}

int winding_number(std::span<const Complex> curve, Complex z) {
  double total = 0.0;
  const size_t n = curve.size();
  for (size_t j = 0; j < n; ++j) {
    Complex a = curve[j] - z;
    Complex b = curve[(j + 1) % n] - z;
    total += std::arg(b / a);
  }
  return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

bool unwrapped_log(std::span<const Complex> values, std::vector<Complex>& out) {
  const size_t n = values.size();
  out.resize(n);
  if (n == 0) return true;
  double prev_arg = std::arg(values[0]);
  if (!(std::abs(values[0]) > 0.0)) return false;
  out[0] = Complex(std::log(std::abs(values[0])), prev_arg);
  double acc = prev_arg;
  for (size_t j = 1; j < n; ++j) {
    if (!(std::abs(values[j]) > 0.0)) return false;
    double d = std::arg(values[j] / values[j - 1]);
    acc += d;
    out[j] = Complex(std::log(std::abs(values[j])), acc);
  }
  // loop closure: total winding must vanish
  double closure = acc + std::arg(values[0] / values[n - 1]) - prev_arg;
  return std::abs(closure) < 1e-6;
}

}  // namespace ctoda
