#pragma once

#include <functional>

#include "ctoda/pairspace.hpp"
#include "ctoda/tau.hpp"

namespace ctoda {

/// A circle-series together with its derivative along the t0 flow (central
/// finite differences); the carrier for Poisson-bracket arithmetic.
struct FlowedSeries {
  ComplexSeries value;
  ComplexSeries dt0;
};

/// {A, B}_T = w A' (dt0 B) - w (dt0 A) B', truncated to `window`.
ComplexSeries poisson_bracket(const FlowedSeries& A, const FlowedSeries& B,
                              Window window);

/// Generator convention for the negative flows: the literal reading uses
/// powers of Ltilde itself and fails the Lax residual check at O(1); the
/// resolved convention uses powers of 1/Ltilde (the series with leading
/// r/w), which passes at O(eps^2).
enum class NegFlowConvention { PowersOfLtilde, PowersOfLtildeInverse };

/// B_n = (L^n)_{>0} + (1/2)(L^n)_0 for n >= 1; for n <= -1 the generator is
/// built from Ltilde per the convention.
ComplexSeries lax_generator(const ComplexSeries& L, const ComplexSeries& Ltilde,
                            int n, NegFlowConvention conv);

/// Flow family + series extraction defining a Lax check; covers both the
/// pair-space flows (L = g, Ltilde = f) and the Fourier-side flows on the
/// inverse series.
struct LaxSetup {
  std::function<ConformalPair(const ConformalPair&, int, double)> flow;
  std::function<ComplexSeries(const ConformalPair&)> L;
  std::function<ComplexSeries(const ConformalPair&)> Ltilde;
  Window cmp_L;       // coefficient window for the L-side residual
  Window cmp_Ltilde;  // and for the Ltilde side
};

/// The pair-space hierarchy: L = g, Ltilde = f, coordinate flows.
LaxSetup pairspace_lax(int N);

struct LaxResidual {
  double res_L = 0.0;
  double res_Ltilde = 0.0;
  double max() const { return std::max(res_L, res_Ltilde); }
};

/// Sup coefficient norm of FD(dL/dt_n) - {B_n, L} (and the Ltilde version)
/// over the comparison windows.
LaxResidual lax_residual(const LaxSetup& s, const ConformalPair& p, int n,
                         double eps,
                         NegFlowConvention conv =
                             NegFlowConvention::PowersOfLtildeInverse);

/// Orlov-Schulman values on the grid: M from the t/v series in g, Mtilde
/// from the series in f, both with the noise-takeover cutoff; residuals
/// against g/f and against each other.
struct OrlovReport {
  std::vector<Complex> M, Mt;
  double res_M_gf = 0.0;
  double res_Mt_gf = 0.0;
  double res_M_Mt = 0.0;
  bool tail_decayed = true;  // false: the series stopped converging on |g(S1)|
};
OrlovReport orlov(const ConformalPair& p, const MomentSet& ms);

/// ||{L, M}_T - L||_inf on the grid, with M built as a series from the
/// moment sums and dt0 by recomputation at the flowed pairs.
double canonical_pair_residual(const ConformalPair& p, const MomentSet& ms,
                               double eps);

/// ||{g, 1/f}_T - 1||_inf on the grid (string equation).
double string_residual(const ConformalPair& p, double eps);

/// ||M - Mtilde||_inf and ||f Mtilde - g||_inf on the grid.
struct RhResidual {
  double m_vs_mt = 0.0;
  double factorization = 0.0;
};
RhResidual rh_identities(const ConformalPair& p, const MomentSet& ms);

}  // namespace ctoda
