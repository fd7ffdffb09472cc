#pragma once

#include "ctoda/pairspace.hpp"
#include "ctoda/series.hpp"

namespace ctoda {

/// Parameters of the linear-fractional family f = w/(b(1+aw)), g = bw + c.
struct MobiusParams {
  Complex a;
  Complex b;
  Complex c;
};

/// Validated construction; rejects |a| >= 1, b = 0, |c/b| >= 1.
MobiusParams mobius_params(Complex a, Complex b, Complex c);

/// The truncated-series pair of the family (exact geometric coefficients).
ConformalPair mobius_pair(const MobiusParams& p, int N, int m);

/// Closed-form moments: t_{-1} = -c, t_0 = b^2, t_1 = ab, t_n = 0 otherwise;
/// v_n = b^2 c^n, v_{-n} = -b^{n+2} a^n, v_0 = b^2 log b^2 - b^2 + abc.
MomentSet mobius_moments(const MobiusParams& p, int N);

/// log T = (t0^2/4) log t0^2 - (3/4) t0^2 - t_{-1} t_0 t_1 (principal logs).
Complex mobius_log_tau(const MobiusParams& p);

/// Closed forms for the circle-homeomorphism slice gamma in PSL(2,R):
/// gamma(w) = e^{-i alpha} (w + conj(a)) / (1 + a w).
struct MobiusHomeoOracle {
  Complex a;
  double alpha = 0.0;
  MobiusParams params;    // welded pair parameters b, c
  ConformalPair pair;     // truncated-series pair
  MomentSet fourier;      // Fourier-side moments (source "mobius-closed-form")
  Complex log_tau;

  Complex gamma(Complex w) const;
  Complex gamma_inv(Complex w) const;
};

MobiusHomeoOracle mobius_homeo(Complex a, double alpha, int N, int m);

}  // namespace ctoda
