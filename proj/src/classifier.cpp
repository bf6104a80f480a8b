#include "rwre/classifier.hpp"

#include <cmath>
#include <stdexcept>
#include <variant>

#include "rwre/logspace.hpp"

namespace rwre {

namespace {

// Growth below 5% over the second half counts as "stalled".
const double kGrowthEpsilon = std::log(1.05);

// A stalled harmonic scale alone does not separate transience from a
// recurrent environment whose running maximum happens to sit in the first
// half of the window (for symmetric step laws that is roughly a coin flip).
// Genuine transience in the covered families comes with a potential that
// keeps sinking: all four quarter-point values negative, the later ones
// materially below the earlier ones, and the last two below fixed floors.
// The ratio guards are calibrated against the slowest covered descent
// (potential ~ -n^{0.7}, quarter-point ratio 2^{0.7} = 1.62) with room for
// noise, while a diffusive recurrent path almost never sustains the full
// ordered pattern.
bool sustained_descent(double q1, double q2, double q3, double q4) {
  return q1 < 0.0 && q2 < -4.0 && q3 < 0.0 && q4 < -8.0 && q2 <= 1.25 * q1 &&
         q3 <= 1.10 * q2 && q4 <= 1.02 * q3;
}

// Asymmetric heavy step laws sink the potential through a handful of giant
// jumps rather than a steady slope, so entire quarters can sit flat at an
// enormous depth and fail the ratio guards above.  Recognising that regime
// takes three marks at once:
//   * depth superlinear in the window length (three window lengths), which
//     diffusive and drift-dominated environments cannot reach;
//   * a running maximum that never recovers more than 2% of the drop; and
//   * a one-sided step spectrum: the largest opposing (positive) step at
//     least four decades below the largest aligned (negative) step.
// The last mark is what separates a genuinely lopsided step law from a
// symmetric heavy-tailed one whose window happened to open with a giant
// negative jump: the symmetric law's two one-sided maxima are comparable
// Frechet variables, and a four-decade spread between them is a
// ~10^(-4 alpha) event, while a law whose negative tail is materially
// heavier separates the two maxima by a polynomial factor of the window
// length.
bool deep_plunge(double q4, double maxPrefix, double maxStepUp,
                 double maxStepDown, int64_t window) {
  return q4 <= -3.0 * static_cast<double>(window) &&
         std::max(maxPrefix, 0.0) <= 0.02 * (-q4) &&
         maxStepUp <= 1e-4 * maxStepDown;
}

}  // namespace

std::string to_string(EmpiricalPhase phase) {
  switch (phase) {
    case EmpiricalPhase::kTransient:
      return "Transient";
    case EmpiricalPhase::kNullRecurrent:
      return "NullRecurrent";
    case EmpiricalPhase::kPositiveRecurrent:
      return "PositiveRecurrent";
    case EmpiricalPhase::kIndeterminate:
      return "Indeterminate";
  }
  return "?";
}

std::string to_string(PredictedPhase phase) {
  switch (phase) {
    case PredictedPhase::kTransient:
      return "Transient";
    case PredictedPhase::kRecurrent:
      return "Recurrent";
    case PredictedPhase::kRecurrentNull:
      return "RecurrentNull";
    case PredictedPhase::kBoundary:
      return "Boundary";
    case PredictedPhase::kNotCovered:
      return "NotCovered";
  }
  return "?";
}

PhaseVerdict classify(const Environment& env, const QuenchedFunctionals& fn) {
  const int64_t n = fn.sites();
  if (n < 1 || n > env.size()) {
    throw std::invalid_argument(
        "classify: functionals truncation must be in [1, env size]");
  }

  PhaseVerdict verdict;
  verdict.predicted = predicted_regime(env.spec());
  verdict.truncation = n;

  const auto ui = [](int64_t i) { return static_cast<size_t>(i); };
  const int64_t half = n / 2;

  if (half >= 1) {
    verdict.evidence.logFGrowth = fn.logF[ui(n - 1)] - fn.logF[ui(half - 1)];
    verdict.evidence.maxPrefixGrowth =
        fn.maxPrefix[ui(n - 1)] - fn.maxPrefix[ui(half - 1)];

    // Running log of sum_{i<=k} e^{-S_{i-1}}, snapshotted at half window;
    // logD[i] = S_{i-1} is already stored.
    LogSumAccumulator firstHalf;
    LogSumAccumulator tail;
    for (int64_t i = 0; i < n; ++i) {
      (i < half ? firstHalf : tail).add(-fn.logD[ui(i)]);
    }
    verdict.evidence.invDTailSum = tail.value();

    if (n >= kClassifierMinTruncation) {
      const double logInvHalf = firstHalf.value();
      const double logInvFull = logaddexp(logInvHalf, tail.value());
      const double invGrowth = logInvFull - logInvHalf;

      const double q1 = fn.S[ui(n / 4 - 1)];
      const double q2 = fn.S[ui(half - 1)];
      const double q3 = fn.S[ui((3 * n) / 4 - 1)];
      const double q4 = fn.S[ui(n - 1)];

      double maxStepUp = 0.0;
      double maxStepDown = 0.0;
      for (int64_t j = 0; j < n; ++j) {
        const double lambda = env.lambda(j);
        maxStepUp = std::max(maxStepUp, lambda);
        maxStepDown = std::max(maxStepDown, -lambda);
      }

      const bool transientSignal =
          verdict.evidence.logFGrowth < kGrowthEpsilon &&
          (sustained_descent(q1, q2, q3, q4) ||
           deep_plunge(q4, fn.maxPrefix[ui(n - 1)], maxStepUp, maxStepDown,
                       n));
      const bool positiveSignal = invGrowth < kGrowthEpsilon;

      if (transientSignal && positiveSignal) {
        verdict.empirical = EmpiricalPhase::kIndeterminate;
      } else if (transientSignal) {
        verdict.empirical = EmpiricalPhase::kTransient;
      } else if (positiveSignal) {
        verdict.empirical = EmpiricalPhase::kPositiveRecurrent;
      } else {
        verdict.empirical = EmpiricalPhase::kNullRecurrent;
      }
    }
  }
  return verdict;
}

PredictedPhase predicted_regime(const EnvironmentSpec& spec) {
  spec.validate();
  const DopeKind kind = spec.dope.kind();

  if (kind == DopeKind::kZero) {
    if (is_symmetric(spec.zeta)) return PredictedPhase::kRecurrentNull;
    if (std::holds_alternative<HeavyAsymmetricZeta>(spec.zeta)) {
      return PredictedPhase::kTransient;
    }
    return PredictedPhase::kNotCovered;
  }

  // The two power-law families share one shape: a critical dope exponent
  // splits a "systematic drift decides" region from a "recurrent for any
  // drift" region.  For the vanishing profile the drift-decided region is
  // below the critical exponent; for the saturating profile it is above.
  const auto classify_family = [&](double criticalBeta,
                                   bool driftDecidesBelow) {
    const double beta = spec.dope.beta();
    if (std::abs(beta - criticalBeta) <= kCriticalSurfaceTolerance) {
      return PredictedPhase::kBoundary;
    }
    const bool driftDecides =
        driftDecidesBelow ? beta < criticalBeta : beta > criticalBeta;
    if (!driftDecides) return PredictedPhase::kRecurrent;
    if (spec.delta > 0.0) return PredictedPhase::kTransient;
    if (spec.delta < 0.0) return PredictedPhase::kRecurrent;
    return PredictedPhase::kNotCovered;  // delta = 0: no sign to decide by
  };

  if (kind == DopeKind::kPowerLaw) {
    if (is_finite_variance(spec.zeta)) {
      return classify_family(0.5, /*driftDecidesBelow=*/true);
    }
    if (const auto* heavy = std::get_if<HeavySymmetricZeta>(&spec.zeta)) {
      if (heavy->alpha > 1.0 && heavy->alpha < 2.0) {
        return classify_family(1.0 - 1.0 / heavy->alpha,
                               /*driftDecidesBelow=*/true);
      }
    }
    return PredictedPhase::kNotCovered;
  }

  if (kind == DopeKind::kOneMinusPowerLaw) {
    if (const auto* heavy = std::get_if<HeavySymmetricZeta>(&spec.zeta)) {
      if (heavy->alpha > 0.0 && heavy->alpha < 1.0) {
        return classify_family(1.0 - heavy->alpha,
                               /*driftDecidesBelow=*/false);
      }
    }
    return PredictedPhase::kNotCovered;
  }

  return PredictedPhase::kNotCovered;
}

bool phases_agree(EmpiricalPhase empirical, PredictedPhase predicted) {
  switch (predicted) {
    case PredictedPhase::kTransient:
      return empirical == EmpiricalPhase::kTransient;
    case PredictedPhase::kRecurrent:
    case PredictedPhase::kRecurrentNull:
      return empirical == EmpiricalPhase::kNullRecurrent ||
             empirical == EmpiricalPhase::kPositiveRecurrent;
    case PredictedPhase::kBoundary:
    case PredictedPhase::kNotCovered:
      return false;
  }
  return false;
}

}  // namespace rwre
