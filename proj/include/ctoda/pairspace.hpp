#pragma once

#include <string>
#include <vector>

#include "ctoda/series.hpp"

namespace ctoda {

/// A normalized pair (f, g): f = a1 w + ... univalent on the disc
/// (window [1, N]), g = b w + b0 + ... univalent outside it (window [-N, 1]),
/// with a1 b = 1.  Samples of f, g and their derivatives on the m-point
/// circle grid are cached at construction; treat instances as immutable.
struct ConformalPair {
  ComplexSeries f;
  ComplexSeries g;
  int m = 0;

  std::vector<Complex> grid;  // w_j
  std::vector<Complex> fs, gs, dfs, dgs;

  Complex a1() const { return f.coeff(1); }
  Complex b() const { return g.coeff(1); }
  int order() const { return std::max(f.hi(), -g.lo()); }
};

/// Validate invariants and cache grid samples.  Throws on: degenerate or
/// badly-scaled leading coefficients, broken normalization, grid-level
/// injectivity failure, 0 on/outside the g-curve, unbounded f samples.
ConformalPair make_pair(const ComplexSeries& f, const ComplexSeries& g, int m);

/// Rescale (f_raw, g_raw) by the principal root r of r^2 = 1/(a1 b) so the
/// result satisfies a1 b = 1, then validate.
ConformalPair normalize_pair(const ComplexSeries& f_raw,
                             const ComplexSeries& g_raw, int m);

/// (f + eps df, g + eps dg), renormalized.
ConformalPair shifted_pair(const ConformalPair& p, const ComplexSeries& df,
                           const ComplexSeries& dg, Complex eps);

/// The coordinates t_n and their duals v_n, |n| <= order.
struct MomentSet {
  int order = 0;
  std::vector<Complex> tc, vc;  // indexed n + order
  Complex t0_alt;               // t0 from the second contour form
  std::string source;           // which formula produced the values

  Complex t(int n) const { return tc[static_cast<size_t>(n + order)]; }
  Complex v(int n) const { return vc[static_cast<size_t>(n + order)]; }
  Complex& tref(int n) { return tc[static_cast<size_t>(n + order)]; }
  Complex& vref(int n) { return vc[static_cast<size_t>(n + order)]; }
  double t0_mismatch() const { return std::abs(t(0) - t0_alt); }
};

/// All t_n, v_n by m-point trapezoid quadrature of the circle-parametrized
/// contour forms.  Throws if f vanishes on the grid or a log branch winds.
MomentSet moments(const ConformalPair& p, int N);

/// Branch-tracked samples of log(f(w)/w) (resp. log(g(w)/w)) on the grid,
/// pinned so the grid mean equals the principal log of the leading
/// coefficient.  Throws on a winding mismatch.
std::vector<Complex> log_ratio_samples(const ComplexSeries& s,
                                       std::span<const Complex> values,
                                       std::span<const Complex> grid);

/// Values of the Cauchy-type functions at probe points.  `side` is the
/// winding number of the relevant image curve around the probe (1 interior,
/// 0 exterior); `degraded` flags probes within ~10 grid spacings of the
/// curve, where the quadrature loses accuracy.
struct CauchyProbe {
  Complex value;
  int side = 0;
  bool degraded = false;
};

CauchyProbe s_plus_minus(const ConformalPair& p, Complex z);        // S+/S-
CauchyProbe s_tilde_plus_minus(const ConformalPair& p, Complex z);  // S~+/S~-

/// Sup-norm residuals of the boundary jump relations evaluated on the grid:
/// rho2 for 1/f against the t/v series in g(w), rho1 for g/f^2 against the
/// series in f(w).
struct JumpResidual {
  double rho2 = 0.0;
  double rho1 = 0.0;
};
JumpResidual jump_residual(const ConformalPair& p, const MomentSet& ms);

/// Generating functions Phi(z) = sum v_n z^-n / n (window [-N,-1]) and
/// Psi(z) = sum v_{-n} z^n / n (window [1,N]).
struct PhiPsi {
  ComplexSeries phi;
  ComplexSeries psi;
};
PhiPsi phi_psi(const MomentSet& ms);

/// |Psi'(z) + S~+(z)| at an interior probe and |Phi'(z) - S-(z) - t0/z| at
/// an exterior probe; cross-checks the generating functions against the
/// Cauchy quadratures.
double psi_derivative_residual(const ConformalPair& p, const MomentSet& ms,
                               const PhiPsi& pp, Complex interior_probe);
double phi_derivative_residual(const ConformalPair& p, const MomentSet& ms,
                               const PhiPsi& pp, Complex exterior_probe);

/// Newton solve of s(x) = target for x near start (complex).  Throws on
/// stagnation.
Complex invert_map_at(const ComplexSeries& s, const ComplexSeries& ds,
                      Complex target, Complex start, double tol = 1e-13);

/// Pointwise residual, over the grid, between the two expressions (one
/// through g o f^{-1}, one through 1/(f o g^{-1})) for the variation of the
/// welding data along the curve (f,g) + eps (df,dg); both are evaluated by
/// central finite differences with composition by complex Newton inversion.
double composition_variation_residual(const ConformalPair& p,
                                      const ComplexSeries& df,
                                      const ComplexSeries& dg, double eps,
                                      int stride = 8);

}  // namespace ctoda
