#pragma once

// Finite-truncation phase classification.
//
// `classify` inspects the quenched functionals of one realized environment
// and issues an empirical verdict (transient / null recurrent / positive
// recurrent / indeterminate) from scale-free growth statistics of the
// harmonic scale f, the potential S, and the series sum e^{-S}.  The rule is
// a documented heuristic: growth thresholds are fractions (5%) of the value
// at half truncation, so the decision is invariant under rescaling the
// truncation window.
//
// `predicted_regime` is the closed-form phase table for the declared
// parameter families: it maps an EnvironmentSpec to the almost-sure phase,
// without looking at any realization.  Families sitting exactly on a
// critical surface report Boundary; parameter combinations outside the
// tabulated families report NotCovered.

#include <cstdint>
#include <string>

#include "rwre/environment.hpp"
#include "rwre/functionals.hpp"

namespace rwre {

enum class EmpiricalPhase : uint8_t {
  kTransient = 0,
  kNullRecurrent = 1,
  kPositiveRecurrent = 2,
  kIndeterminate = 3,
};

enum class PredictedPhase : uint8_t {
  kTransient = 0,
  kRecurrent = 1,      // recurrence asserted, null/positive not resolved
  kRecurrentNull = 2,  // recurrence asserted with the null refinement
  kBoundary = 3,       // spec sits on a critical surface
  kNotCovered = 4,     // outside the tabulated families
};

std::string to_string(EmpiricalPhase phase);
std::string to_string(PredictedPhase phase);

// Growth statistics over the second half of the truncation window, reported
// alongside every verdict so callers can audit the decision.
struct PhaseEvidence {
  double logFGrowth = 0.0;       // logF[N-1] - logF[N/2-1]
  double maxPrefixGrowth = 0.0;  // max of S over [0,N) minus over [0,N/2)
  double invDTailSum = 0.0;      // log of sum e^{-S_{i-1}} over i in [N/2,N)
};

struct PhaseVerdict {
  EmpiricalPhase empirical = EmpiricalPhase::kIndeterminate;
  PredictedPhase predicted = PredictedPhase::kNotCovered;
  PhaseEvidence evidence;
  int64_t truncation = 0;
};

// Below this many sites every empirical verdict is Indeterminate: the
// half-window statistics have not seen enough of the environment to mean
// anything.
inline constexpr int64_t kClassifierMinTruncation = 1000;

// Tolerance for declaring a spec to sit on a critical surface.
inline constexpr double kCriticalSurfaceTolerance = 1e-9;

// Empirical verdict for one realized environment, from functionals computed
// to truncation N = fn.sites().  Deterministic given (env, fn).  The
// returned verdict also carries predicted_regime(env.spec()).
PhaseVerdict classify(const Environment& env, const QuenchedFunctionals& fn);

// Closed-form phase for the declared families:
//   - undoped + symmetric step law          -> RecurrentNull
//   - undoped + asymmetric heavy tails      -> Transient
//   - vanishing dope n^-beta + finite-variance steps:
//       beta < 1/2: sign of delta decides (delta = 0 -> NotCovered);
//       beta > 1/2: Recurrent for any delta
//   - vanishing dope n^-beta + symmetric heavy tails, alpha in (1,2):
//       same shape with critical beta = 1 - 1/alpha
//   - saturating dope 1 - n^-beta + symmetric heavy tails, alpha in (0,1):
//       beta < 1 - alpha: Recurrent for any delta;
//       beta > 1 - alpha: sign of delta decides (delta = 0 -> NotCovered)
//   - anything else -> NotCovered (kinds are taken literally; a Constant(0)
//     profile is NotCovered even though it samples like Zero)
// Specs within kCriticalSurfaceTolerance of their family's critical beta
// return Boundary.
PredictedPhase predicted_regime(const EnvironmentSpec& spec);

// Scoring rule used by sweeps: Transient matches Transient; Recurrent and
// RecurrentNull match either empirical recurrence flavour; Indeterminate,
// Boundary, and NotCovered never match.
bool phases_agree(EmpiricalPhase empirical, PredictedPhase predicted);

}  // namespace rwre
