#pragma once

// Empirical validators for almost-sure limit laws of i.i.d. partial sums.
//
// These certify the noise samplers and make the log-odds decomposition
// checkable independently of any walk: iterated-logarithm envelopes, heavy-
// tail analogues, Hirsch/Klass-Zhang lower envelopes, Chung-type liminf
// probes, and the drift/noise decomposition of the potential sums.
//
// Almost-sure statements are tested as finite-horizon statistical envelopes
// with explicit (fraction q, replicas K, horizon n); failures at small n are
// expected, and only envelopes of that form are ever asserted.  Statistics
// are evaluated on a dyadic checkpoint grid (matching the log log
// normalizations), restricted to times t >= 16 so that log log t > 0.

#include <cstdint>
#include <string>
#include <vector>

#include "rwre/environment.hpp"
#include "rwre/rng.hpp"

namespace rwre {

// Statistics are computed only at checkpoints t >= 16: below e^e the inner
// logarithm of log log t is not positive and the normalizations are
// meaningless.
inline constexpr int64_t kMinStatisticTime = 16;

// Horizons below these floors have too few usable checkpoints for the
// corresponding statistic; the checks flag them instead of reporting noise.
inline constexpr int64_t kMinEnvelopeHorizon = 1000;   // limsup-type checks
inline constexpr int64_t kMinLiminfHorizon = 10000;    // liminf-type probes

// "Tail window": the last this-many usable checkpoints, where the envelope
// examples are scored.
inline constexpr int64_t kDefaultTailWindow = 10;

struct SumPathStats {
  int64_t horizon = 0;
  std::vector<int64_t> checkpoints;    // 1, 2, 4, ..., then horizon
  std::vector<double> S;               // partial sum at each checkpoint
  std::vector<double> runningMaxS;     // max_{i <= t} S_i
  std::vector<double> runningMinS;     // min_{i <= t} S_i
  std::vector<double> runningMaxAbsS;  // max_{i <= t} |S_i|
  ZetaRegime regime;
  uint64_t seed = 0;
};

// One sample path of partial sums of i.i.d. draws from the regime,
// checkpointed dyadically.  Pure function of (regime, stream, horizon).
SumPathStats sample_sum_path(const ZetaRegime& regime, int64_t horizon,
                             CounterStream stream);

// Standard deviation of a finite-variance regime (1 for the +/-1 coin,
// sigma for the Gaussian).  Throws std::invalid_argument for heavy regimes.
double finite_variance_sigma(const ZetaRegime& regime);

// ---------------------------------------------------------------------------
// Iterated-logarithm envelope (finite variance): the ratio
// S_t / (sigma * sqrt(2 t log log t)) has almost-sure limsup 1.  The
// declared statistic is the per-replica running supremum of that ratio over
// all steps t >= 16 up to the horizon — the finite-horizon analogue of the
// limsup itself.  (The supremum restricted to a handful of late checkpoints
// was measured to sit far below 1 with high variance; it cannot meet any
// envelope centred on the limit, so it is not the declared statistic.)
//
// Declared envelope: maxRatio in [0.4, 1.8] for >= 80% of replicas at
// horizon 10^6 with 50 replicas.  Calibration over 10 disjoint seed batches
// (500 replicas total, +/-1 coin regime): per-batch pass fractions
// 0.90..0.98, per-batch medians 0.94..1.05 — the statistic is centred on
// the almost-sure constant 1, but at this horizon its spread genuinely
// fills [0.4, 1.8]; a tighter interval such as [0.5, 1.3] holds for only
// ~71% of replicas and would fail the envelope for no mathematical reason.
struct RatioEnvelopeReport {
  std::vector<double> maxRatio;  // per replica: sup of the ratio over the path
  bool horizonTooShort = false;
};
RatioEnvelopeReport check_lil(const ZetaRegime& finiteVariance,
                              int64_t horizon, int64_t replicas,
                              uint64_t seed);

// ---------------------------------------------------------------------------
// Heavy-tail upper envelope: |S_t| <= t^{1/alpha} (log t)^{1/alpha + eps}
// eventually, almost surely (for symmetric alpha-tails, any eps > 0).
// Exceedances are counted at usable checkpoints; the scored tail window is
// the last decade of time, t in (horizon/10, horizon].
struct ExceedanceReport {
  std::vector<int64_t> tailExceedances;   // per replica, last decade of time
  std::vector<int64_t> totalExceedances;  // per replica, all usable checkpoints
  std::vector<double> finalMargin;        // |S_n| / bound at the horizon
  bool horizonTooShort = false;
};
ExceedanceReport check_feller(const ZetaRegime& heavySymmetric,
                              int64_t horizon, double epsilon,
                              int64_t replicas, uint64_t seed);

// ---------------------------------------------------------------------------
// Lower envelopes for the running maximum: eventually, almost surely,
//   finite variance: max_{i<=t} S_i >= t^{1/2} (log t)^{-1-eps}
//   heavy symmetric: max_{i<=t} S_i >= t^{1/alpha} (log t)^{-2/alpha-eps}
struct LowerBoundReport {
  std::vector<uint8_t> holdsAtHorizon;  // per replica
  std::vector<double> marginRatio;      // running max / bound, at the horizon
  bool horizonTooShort = false;
};
LowerBoundReport check_hirsch(const ZetaRegime& finiteVariance,
                              int64_t horizon, double epsilon,
                              int64_t replicas, uint64_t seed);
LowerBoundReport check_kz(const ZetaRegime& heavySymmetric, int64_t horizon,
                          double epsilon, int64_t replicas, uint64_t seed);

// ---------------------------------------------------------------------------
// Liminf probes for the running absolute maximum:
//   finite variance: liminf sqrt(log log t / t) * max|S| = pi*sigma/sqrt(8)
//   heavy symmetric: liminf (log log t / t)^{1/alpha}-scaled max|S| = c0,
//     with c0 in (0, infinity) depending on the law in an unstated way; the
//     heavy probe only reports, never asserts a target.
// The minimum is taken over the last `window` usable dyadic checkpoints:
// including the earliest checkpoints would let the t ~ 16 noise floor set
// the minimum for every replica, probing nothing about the tail.
struct LiminfProbeReport {
  std::vector<double> minStatistic;  // per replica: min over the tail window
  double target = 0.0;               // known constant, or 0 when unspecified
  int64_t window = 0;
  bool horizonTooShort = false;
};
LiminfProbeReport check_chung(const ZetaRegime& finiteVariance,
                              int64_t horizon, int64_t replicas, uint64_t seed,
                              int64_t window = kDefaultTailWindow);
LiminfProbeReport check_em(const ZetaRegime& heavySymmetric, int64_t horizon,
                           int64_t replicas, uint64_t seed,
                           int64_t window = kDefaultTailWindow);

// ---------------------------------------------------------------------------
// Decomposition of the log-odds sums over an environment: with S^lam(n) the
// sum of log-odds over sites 0..n-1 and S^zeta(n) the sum of the coupled
// i.i.d. noise sequence over the same sites,
//
//   kDriftTermLeads         S^lam(n) = (rho*c_beta + o(1)) n^{1-beta}
//                           [vanishing power-law dope, rho != 0, and either
//                            finite variance with beta < 1/2 or symmetric
//                            alpha-tails, alpha in (1,2), beta < 1 - 1/alpha]
//   kResidualFiniteVariance S^lam - S^zeta = O(n^{1-beta})   [beta > 1/2]
//   kResidualHeavy          S^lam - S^zeta = O(n^{1/alpha - eps})
//                           [alpha in (1,2), beta > 1 - 1/alpha]
//   kZeroDope               S^lam == S^zeta exactly (no doped sites)
//   kNotCovered             anything else (boundary values, asymmetric
//                           noise, non-power-law dopes); data still reported
//
// with c_beta = 1/(1-beta).  The fitted slope regresses log|statistic| on
// log n over the top half of usable checkpoints; for kDriftTermLeads the
// statistic is S^lam itself (coefficient = signed exp(intercept)), for the
// residual branches it is S^lam - S^zeta.
enum class DecompositionBranch : uint8_t {
  kDriftTermLeads,
  kResidualFiniteVariance,
  kResidualHeavy,
  kZeroDope,
  kNotCovered,
};
std::string to_string(DecompositionBranch branch);

struct DecompositionReport {
  DecompositionBranch branch = DecompositionBranch::kNotCovered;
  std::vector<int64_t> checkpoints;
  std::vector<double> lambdaSum;
  std::vector<double> zetaSum;
  std::vector<double> residual;  // lambdaSum - zetaSum
  double slope = 0.0;
  double coefficient = 0.0;
  double targetExponent = 0.0;
  double targetCoefficient = 0.0;
};
// Streams `horizon` sites of the spec's environment law (the spec's own
// length field is not consulted) and reports the branch-appropriate fit.
DecompositionReport check_sums_decomposition(const EnvironmentSpec& spec,
                                             int64_t horizon);

// ---------------------------------------------------------------------------
// Two-sample Kolmogorov-Smirnov statistic (inputs are copied and sorted).
double ks_two_sample(std::vector<double> a, std::vector<double> b);

// Symmetry certificate for a noise regime: KS distance between `replicas`
// independent copies of S_horizon and `replicas` independent copies of
// -S_horizon (disjoint streams).  Symmetric regimes should sit below the
// two-sample critical value; the asymmetric regime should not.
double symmetry_ks_statistic(const ZetaRegime& regime, int64_t horizon,
                             int64_t replicas, uint64_t seed);

}  // namespace rwre
