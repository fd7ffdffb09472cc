#pragma once

#include <functional>
#include <vector>

#include "ctoda/grunsky.hpp"
#include "ctoda/pairspace.hpp"
#include "ctoda/toda.hpp"

namespace ctoda {

/// A C^1 circle homeomorphism stored as uniform grid samples of gamma and
/// gamma^{-1}, plus Fourier data of gamma and 1/gamma^{-1} and a trig
/// interpolant of the angle function eta (gamma(e^{i theta}) = e^{i eta}).
class CircleHomeo {
 public:
  /// Numeric construction: gamma^{-1} solved from the angle interpolant.
  static CircleHomeo from_samples(int m, std::vector<Complex> gamma);
  /// Closed-form construction: both maps supplied.
  static CircleHomeo from_maps(int m,
                               const std::function<Complex(Complex)>& gamma,
                               const std::function<Complex(Complex)>& gamma_inv);
  /// gamma = exp(i(theta + u)) for a real trigonometric polynomial
  /// u(theta) = sum_k (a_k cos k theta + b_k sin k theta).
  static CircleHomeo from_angle_perturbation(
      int m, const std::vector<std::pair<double, double>>& cos_sin_coeffs);

  int m() const { return m_; }
  const std::vector<Complex>& gamma() const { return gamma_; }
  const std::vector<Complex>& gamma_inv() const { return gamma_inv_; }
  double qs_bound() const { return qs_bound_; }

  Complex fourier(int k) const;            // of gamma
  Complex fourier_inv_recip(int k) const;  // of 1/gamma^{-1}

  double angle(double theta) const;        // eta(theta), lifted
  double angle_deriv(double theta) const;
  Complex apply(Complex w) const;          // gamma at |w| = 1
  Complex apply_inv(Complex w) const;

 private:
  CircleHomeo() = default;
  void finish(bool solve_inverse);

  int m_ = 0;
  std::vector<Complex> gamma_, gamma_inv_;
  std::vector<Complex> fc_gamma_, fc_inv_recip_;
  std::vector<Complex> u_modes_;  // Fourier modes of u = eta - theta
  double qs_bound_ = 1.0;
};

struct WeldOptions {
  double tol = 1e-10;      // sup-norm defect ||F - G o gamma|| target
  double damping = 0.5;
  int max_iters = 500;
  int order = 24;          // output series window radius
  double qs_limit = 3.0;   // documented convergence domain of the solver
};

struct WeldResult {
  ConformalPair pair;
  int iters = 0;
  double defect = 0.0;
  double truncation = 0.0;  // largest dropped mode beyond the output order
  bool converged = false;
};

/// Damped alternating Fourier projections for the factorization
/// gamma = g^{-1} o f.  Throws std::invalid_argument when the quasisymmetry
/// proxy exceeds opts.qs_limit; reports (not throws) non-convergence.
WeldResult weld(const CircleHomeo& gamma, const WeldOptions& opts = {});

/// gamma = g^{-1} o f recovered by monotone continuation root-finding along
/// the grid.  Throws std::domain_error when the image curves do not match
/// within `match_tol` (the pair is not in the circle-homeomorphism locus).
CircleHomeo compose_welding(const ConformalPair& p, double match_tol = 1e-6);

/// The pair (f, g) with f(w) = 1/conj(g(1/conj(w))), renormalized (the
/// rescaling is unimodular, so the reflection relation survives).
ConformalPair sigma_pair(const ComplexSeries& g, int m);

/// Exterior harmonic moments of the curve g(S^1), pulled back to circle
/// quadratures; negative indices by the reflection t_{-n} = -conj(t_n).
/// v_0 comes from the contour form evaluated on the reflected pair.
MomentSet harmonic_moments(const ComplexSeries& g, int m, int N);

/// Fourier-side moments extracted from gamma and 1/gamma^{-1} samples
/// (valid for complexified states slightly off the unimodular locus).
MomentSet fourier_moments_from_samples(std::span<const Complex> gamma,
                                       std::span<const Complex> gamma_inv,
                                       const ConformalPair& p, int N);

/// Fourier-side moments of a homeomorphism welded by `p`; checks the
/// consistency c_0 = t_0 between the two expansions and throws on mismatch.
MomentSet fourier_moments(const CircleHomeo& h, const ConformalPair& p, int N,
                          double c0_tol = 1e-9);

/// The shortcut integral sometimes quoted for v_0; kept only as a
/// cross-check, never as the definition.
Complex fourier_v0_heuristic(const CircleHomeo& h);

/// Tangent vector of the n-th Fourier-side flow acting on gamma:
/// w^2 P_n'(f(w)) f'(w) for n >= 1, w^2 Q_{|n|}'(f(w)) f'(w) for n <= -1,
/// w^2 f'(w)/f(w) for n = 0 (Faber polynomials of the forward pair).
std::vector<Complex> homeo_variation(const ConformalPair& p, int n);

/// A point of the (complexified) homeomorphism locus: the pair plus the
/// gamma / gamma^{-1} samples solved from it.
struct HomeoState {
  ConformalPair pair;
  std::vector<Complex> gamma;
  std::vector<Complex> gamma_inv;
};

HomeoState homeo_state(const ConformalPair& p, const CircleHomeo& h);

/// Midpoint step of the n-th Fourier-side flow; gamma and gamma^{-1} are
/// re-solved from the stepped pair by warm-started Newton continuation.
HomeoState homeo_flow_step(const HomeoState& st, int n, double eps);
/// Step along a caller-supplied field (pair-tangent) with re-solving.
HomeoState homeo_flow_step_along(
    const HomeoState& st,
    const std::function<std::pair<ComplexSeries, ComplexSeries>(
        const HomeoState&)>& field,
    double eps);

/// The pair-tangent (df, dg) of the n-th Fourier-side flow at a state.
std::pair<ComplexSeries, ComplexSeries> homeo_field(const HomeoState& st,
                                                    int n);

/// log tau of the Fourier-side hierarchy at a state.
Complex log_tau_homeo(const HomeoState& st, const MomentSet& fm);
Complex log_tau_homeo(const HomeoState& st);

/// |FD t_m along flow n - delta_{nm}|.
double check_fourier_duality(const HomeoState& st, int n, int m_idx,
                             double eps);
/// |FD log tau along flow n - v_n|.
double check_homeo_gradient(const HomeoState& st, int n, double eps);
/// |FD^2 log tau along flows (m, n) - Hessian from the forward-pair Grunsky
/// table| (-|mn| b_{m,n} / |m| b_{m,0} / -2 b_{0,0}).
double check_homeo_hessian(const HomeoState& st, int m_idx, int n_idx,
                           double eps, const GrunskyTable& tbl);
/// |FD v_m along flow n - (-|mn| b_{n,m} or |m| b_{0,m})|.
double check_fourier_v_variation(const HomeoState& st, int n, int m_idx,
                                 double eps, const GrunskyTable& tbl);

/// Lax setup for the Fourier-side flows acting on the inverse series
/// (L = g^{-1}, Ltilde = f^{-1}), flowing from the given base state.
LaxSetup homeo_lax(const HomeoState& base, int cmp_radius = 6);

}  // namespace ctoda
