#pragma once

#include <cmath>
#include <functional>

#include "ctoda/grunsky.hpp"
#include "ctoda/pairspace.hpp"

namespace ctoda {

/// Tangent vector of the n-th coordinate flow at a pair: df lives in the f
/// window, dg in the g window; the half-split of the w^1 mode keeps
/// d(a1 b) = 0.
struct VariationField {
  int n = 0;
  ComplexSeries df;
  ComplexSeries dg;
};

/// log T via the circle quadrature of the two generating-function integrals
/// plus t0 v0/2 - t0^2/4.
Complex log_tau_integral(const ConformalPair& p, const MomentSet& ms);
Complex log_tau_integral(const ConformalPair& p);

/// Truncation tail estimate of the Phi/Psi series entering the integral;
/// warn when this exceeds the accuracy you need.
double log_tau_tail_estimate(const ConformalPair& p, const MomentSet& ms);

/// tau = |T|^2; all internal arithmetic stays on log T so branch constants
/// cancel, this is just the exposed modulus form.
inline double tau_abs_squared(Complex log_T) {
  return std::exp(2.0 * log_T.real());
}

/// log T = t0 v0/2 - t0^2/4 - (1/4) sum_{n>=1} (n-2)(t_n v_n + t_{-n} v_{-n}).
/// Throws if the terms fail to decay (divergence suspicion).
Complex log_tau_sum(const MomentSet& ms);

/// The flow field with dt_m = delta_{nm}, built from the Faber polynomials
/// of the inverse pair (powers of g and 1/f).
VariationField variation_field(const ConformalPair& p, int n);

using FieldFn = std::function<VariationField(const ConformalPair&)>;

/// One midpoint (second-order) step along a field; the result is
/// renormalized to a1 b = 1.
ConformalPair flow_step_along(const ConformalPair& p, const FieldFn& field,
                              double eps);
ConformalPair flow_step(const ConformalPair& p, int n, double eps);

/// |central-difference dt_m/d eps along flow n  -  delta_{nm}|.
double check_coordinate_duality(const ConformalPair& p, int n, int m_idx,
                                double eps);

/// Grunsky table of the inverse pair (f^{-1}, g^{-1}) with probe radii
/// scaled to its univalence domains.
GrunskyTable inverse_grunsky(const ConformalPair& p, int N);

/// |FD(log T) along flow n - v_n|.
double check_tau_gradient(const ConformalPair& p, int n, double eps);

/// |FD^2(log T) along flows (m, n) - Hessian from the inverse-pair Grunsky
/// table| (entries -|mn| k_{m,n}, |m| k_{m,0}, -2 k_{0,0}).  The mixed
/// second difference uses the polarization identity along the combined
/// fields V_m +- V_n so the midpoint-step error cancels to O(eps^2).
double check_hessian(const ConformalPair& p, int m_idx, int n_idx, double eps,
                     const GrunskyTable& kappa);
double check_hessian(const ConformalPair& p, int m_idx, int n_idx, double eps);

/// Second difference of log T along a single field direction.
Complex second_difference_log_tau(const ConformalPair& p, const FieldFn& field,
                                  double eps);

}  // namespace ctoda
