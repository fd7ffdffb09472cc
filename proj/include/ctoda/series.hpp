#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

namespace ctoda {

using Complex = std::complex<double>;

/// Contiguous exponent range [lo, hi] of retained Laurent coefficients.
struct Window {
  int lo = 0;
  int hi = 0;

  Window() = default;
  Window(int l, int h) : lo(l), hi(h) {}

  int span() const { return hi - lo + 1; }
  bool contains(int k) const { return k >= lo && k <= hi; }
  bool valid() const { return hi >= lo; }
};

/// Truncated two-sided (Laurent) series  sum_{k=lo}^{hi} c_k w^k  with
/// complex coefficients.  Values are immutable by convention: operations
/// return new series, truncated back into a declared window.
class ComplexSeries {
 public:
  ComplexSeries() : lo_(0), coeffs_(1, Complex(0.0)) {}
  explicit ComplexSeries(Window w);
  ComplexSeries(Window w, std::vector<Complex> coeffs);

  static ComplexSeries monomial(int k, Complex c = Complex(1.0));
  static ComplexSeries constant(Complex c);

  int lo() const { return lo_; }
  int hi() const { return lo_ + static_cast<int>(coeffs_.size()) - 1; }
  Window window() const { return Window(lo(), hi()); }

  /// Coefficient of w^k; zero outside the window.
  Complex coeff(int k) const {
    return window().contains(k) ? coeffs_[static_cast<size_t>(k - lo_)]
                                : Complex(0.0);
  }
  Complex& at(int k);

  std::span<const Complex> coeffs() const { return coeffs_; }

  /// Lowest / highest exponent carrying a coefficient above `tol` in
  /// magnitude.  Returns false if the series is numerically zero.
  bool support(int& lo_nz, int& hi_nz, double tol = 0.0) const;

  double max_abs() const;
  ComplexSeries conjugated() const;  // c_k -> conj(c_k), same window

  std::string str() const;  // short human-readable form, for diagnostics

 private:
  int lo_;
  std::vector<Complex> coeffs_;
};

// ---- exact (window-union) linear arithmetic ----
ComplexSeries operator+(const ComplexSeries& a, const ComplexSeries& b);
ComplexSeries operator-(const ComplexSeries& a, const ComplexSeries& b);
ComplexSeries operator*(Complex s, const ComplexSeries& a);
ComplexSeries operator*(double s, const ComplexSeries& a);
ComplexSeries operator-(const ComplexSeries& a);

/// Restrict / extend to the given window (coefficients outside are dropped,
/// missing ones are zero).
ComplexSeries truncated(const ComplexSeries& s, Window w);

/// Drop numerically-zero edge coefficients (never below a 1-term window).
ComplexSeries trimmed(const ComplexSeries& s, double tol = 0.0);

/// Product truncated to `window`; rejects an empty window.
ComplexSeries mul(const ComplexSeries& a, const ComplexSeries& b, Window window);
/// Product on the full window [lo_a+lo_b, hi_a+hi_b].
ComplexSeries mul(const ComplexSeries& a, const ComplexSeries& b);

/// d/dw.
ComplexSeries derivative(const ComplexSeries& s);

/// Exponent selectors for project().
enum class Part { Positive, Negative, Zero, NonNegative, NonPositive };

ComplexSeries project(const ComplexSeries& s, Part part);
/// Exponent k -> -k (s(1/w) as a series).
ComplexSeries flipped(const ComplexSeries& s);

/// Multiplicative reciprocal of s = c_d w^d (1 + u) where d is the leading
/// exponent (lowest for expansions at 0, highest for expansions at infinity)
/// and u is supported strictly on the far side of d.  Result truncated to
/// `window`.
ComplexSeries reciprocal(const ComplexSeries& s, int d, Window window);

/// Integer power with truncation; n may be negative when `d` identifies a
/// valid leading exponent for reciprocal().
ComplexSeries pow_int(const ComplexSeries& s, int n, Window window);
ComplexSeries pow_int(const ComplexSeries& s, int n, int d, Window window);

/// outer(inner) truncated to `window`.  Uses graded coefficient arithmetic
/// when inner has leading exponent 1 on either side; otherwise falls back to
/// circle sampling (evaluate inner on a grid, then outer at those values),
/// which rejects inner samples too close to 0 when outer has negative
/// exponents.
ComplexSeries compose(const ComplexSeries& outer, const ComplexSeries& inner,
                      Window window);

/// Compositional inverse r with compose(s, r) = w up to truncation order.
/// s must have leading exponent exactly 1 with a nonzero coefficient:
/// either s = c1 w + c2 w^2 + ...           (expansion at 0), or
///        s = c1 w + c0 + c_{-1}/w + ...    (expansion at infinity).
/// The result carries the same shape; `window` controls its truncation.
ComplexSeries invert_composition(const ComplexSeries& s, Window window);
ComplexSeries invert_composition(const ComplexSeries& s);

/// log(s(w)/w^d) where d is the leading exponent of s (see reciprocal()).
/// Branch: principal log of the leading coefficient.
ComplexSeries log_ratio(const ComplexSeries& s, int d, Window window);
ComplexSeries log_ratio(const ComplexSeries& s, int d);

/// exp of a series whose nonconstant part is strictly one-sided.
ComplexSeries exp_series(const ComplexSeries& s, Window window);

/// Series evaluation at an arbitrary point (Horner in w and 1/w).
Complex eval(const ComplexSeries& s, Complex z);
std::vector<Complex> eval(const ComplexSeries& s, std::span<const Complex> pts);

// ---- spectral sampling on the unit circle ----

/// Values of a function at the m-th roots of unity w_j = exp(2*pi*i*j/m).
struct CircleSamples {
  int m = 0;
  std::vector<Complex> values;

  CircleSamples() = default;
  CircleSamples(int grid, std::vector<Complex> v);
};

/// In-place unnormalized power-of-two FFT: x_k <- sum_j x_j exp(sign*2*pi*i*jk/m).
void fft_pow2(std::vector<Complex>& x, int sign);

/// Exact evaluation of the series at the m-point grid.
CircleSamples to_samples(const ComplexSeries& s, int m);
/// Coefficient recovery; rejects window spans above m/2 (aliasing).
ComplexSeries from_samples(const CircleSamples& v, Window window);

int round_up_pow2(int n);

/// Points r * exp(2*pi*i*j/m), j = 0..m-1.
std::vector<Complex> circle_points(double radius, int m);

/// Discrete winding number of a sampled closed curve around z.
int winding_number(std::span<const Complex> curve, Complex z);

/// Truncation index for a term sequence evaluated at the edge of validity:
/// keep terms 1..n* where n* is the position of the globally smallest
/// sup-norm (the smallest-term rule; beyond it amplified noise grows).
/// `mags[0]` corresponds to the first term.  Returns mags.size() when the
/// sequence decays to the end.
size_t smallest_term_cutoff(std::span<const double> mags);

/// Continuous-branch logs of a cyclic sample sequence: principal at index 0,
/// then 2*pi-unwrapped along the loop.  Fails (returns false) when values
/// touch zero or the loop winds around the origin.
bool unwrapped_log(std::span<const Complex> values, std::vector<Complex>& out);

}  // namespace ctoda
