#pragma once

#include <vector>

#include "ctoda/series.hpp"

namespace ctoda {

/// Generalized Grunsky coefficients b_{m,n}, |m|,|n| <= order, of a pair
/// (F, G) with F = a1 z + ... univalent near 0 and G = beta z + b0 + ...
/// univalent near infinity.  Stored dense and symmetrized; `asymmetry`
/// records the largest |b_mn - b_nm| seen before symmetrization and
/// `axis_mismatch` the largest disagreement between the two-variable
/// extraction and the single-variable log expansions on row/column 0.
struct GrunskyTable {
  int order = 0;
  std::vector<Complex> entries;  // (2N+1)^2, row-major over (m+N, n+N)
  double asymmetry = 0.0;
  double axis_mismatch = 0.0;
  bool axis_consistent = true;

  Complex b(int m, int n) const;
  Complex& bref(int m, int n);
};

/// Faber polynomials: P[n] is a degree-n polynomial in w (window [0, n]),
/// Q[n] a degree-n polynomial in 1/w (window [-n, 0]); index 0 holds the
/// constant 1.
struct FaberPolys {
  std::vector<ComplexSeries> P;
  std::vector<ComplexSeries> Q;
};

struct GrunskyOptions {
  // Probe radii: two distinct interior radii (F side, fractions of the
  // univalence disc) and two distinct exterior ones (G side).  Coefficient
  // (m, n) extraction amplifies rounding noise by r^{-m-n}-type factors, so
  // radii near 1 are preferred for exactly-known inputs; pass deeper radii
  // (and a larger truncation order) for series carrying truncation tails.
  double r_in[2] = {0.80, 0.65};
  double r_out[2] = {1.50, 1.20};
  double inner_scale = 1.0;  // radius of the disc where F is trusted
  double outer_scale = 1.0;  // radius beyond which G is trusted
  int grid = 256;            // torus sampling points per variable
  double axis_tol = 1e-8;    // route agreement required before averaging
};

/// Extract b_{m,n} for |m|,|n| <= N by double Fourier analysis of the three
/// log expansions on sampling tori.  Throws std::domain_error when the log
/// argument vanishes or winds on a torus (radii outside the univalence
/// annulus).
GrunskyTable grunsky_table(const ComplexSeries& F, const ComplexSeries& G,
                           int N, const GrunskyOptions& opts = {});

/// P_n = ((G^{-1})^n)_{>=0}, Q_n = ((F^{-1})^{-n})_{<=0} for n = 0..N.
FaberPolys faber(const ComplexSeries& F, const ComplexSeries& G, int N);

/// Residuals of the six expansion identities tying the Faber polynomials to
/// the Grunsky coefficients.  residual[i] is the max coefficient residual of
/// identity i over n = 1..N; `max_residual` is their maximum.
struct FaberExpansionReport {
  double log_g = 0.0;    // log(G(z)/z)  vs  log beta - sum b_{0,m} z^-m
  double log_f = 0.0;    // log(F(z)/z)  vs  log a1   - sum b_{0,-m} z^m
  double p_of_g = 0.0;   // P_n(G(z))    vs  z^n + n sum b_{n,m} z^-m
  double p_of_f = 0.0;   // P_n(F(z))    vs  n b_{n,0} + n sum b_{n,-m} z^m
  double q_of_g = 0.0;   // Q_n(G(z))    vs -n b_{-n,0} + n sum b_{-n,m} z^-m
  double q_of_f = 0.0;   // Q_n(F(z))    vs  z^-n + n sum b_{-n,-m} z^m
  double max_residual = 0.0;
};

FaberExpansionReport verify_faber_expansions(const ComplexSeries& F,
                                             const ComplexSeries& G, int N,
                                             const GrunskyOptions& opts = {});

}  // namespace ctoda
