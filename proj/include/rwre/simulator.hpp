#pragma once

// Long-horizon quenched simulation of the walk, with checkpointed running
// maxima, first-hit times, and envelope fitting.
//
// The simulation consumes exactly one uniform draw from the stream per step
// (this is a stable contract: replays with an identical stream reproduce the
// trajectory decision-for-decision).  Step probabilities are computed from
// the environment on first visit to a site and cached in a flat array; a
// walk started at the origin visits a contiguous prefix of sites, so the
// cache has no holes.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "rwre/environment.hpp"
#include "rwre/rng.hpp"

namespace rwre {

// The walk climbed to the last sampled site: continuing would need
// probabilities beyond the environment.  Sizes are chosen from theory by the
// caller; running out is a reported error, never silent extension (extension
// would reorder the random streams).
class EnvironmentExhaustedError : public std::runtime_error {
 public:
  EnvironmentExhaustedError(int64_t time, int64_t level)
      : std::runtime_error("environment exhausted: walk reached site " +
                           std::to_string(level) + " (the last sampled site) "
                           "at step " +
                           std::to_string(time)),
        time_(time),
        level_(level) {}

  int64_t time() const { return time_; }
  int64_t level() const { return level_; }

 private:
  int64_t time_;
  int64_t level_;
};

struct TrajectoryStats {
  std::vector<int64_t> checkpoints;  // t_k, strictly increasing, last = steps
  std::vector<int64_t> runningMax;   // M(t_k) = max_{s <= t_k} X_s
  // First hit times of levels 1, 2, ..., runningMax.back():
  // firstHitTime[k] = tau_{k+1}.  Levels are contiguous for a
  // nearest-neighbour walk from the origin.
  std::vector<int64_t> firstHitTime;
  int64_t steps = 0;     // total steps simulated
  uint64_t seed = 0;     // key of the stream that drove the run
};

struct EnvelopeFit {
  double theta = 0.0;      // slope of log M(t) against log log t
  double prefactor = 0.0;  // exp(intercept)
  size_t windowBegin = 0;  // index range [windowBegin, windowEnd) into
  size_t windowEnd = 0;    //   the checkpoint arrays used for the fit
  double rSquared = 0.0;
  bool degenerate = false;  // running max never moved over the window
};

inline constexpr double kDefaultCheckpointRatio = 1.3;

// Geometric checkpoint grid: t_0 = 1, t_{k+1} = ceil(t_k * ratio), truncated
// to maxSteps and always ending exactly at maxSteps.
std::vector<int64_t> checkpoint_grid(int64_t maxSteps, double ratio);

// Exact simulation of the quenched chain for maxSteps steps, including the
// boundary rule (holds at the origin with probability p_0).  Deterministic
// given (env, stream state, maxSteps, ratio).  Throws
// EnvironmentExhaustedError if the walk reaches site env.size() - 1.
TrajectoryStats run_trajectory(const Environment& env, int64_t maxSteps,
                               double checkpointRatio, CounterStream stream);

// Least-squares line of log M(t) against log log t over the top half of the
// checkpoints with t >= 10^4.  Requires at least 8 such checkpoints.  A
// window whose running max never moves is reported with theta = 0 and the
// degenerate flag set.
EnvelopeFit fit_envelope(const TrajectoryStats& stats);

// Closed-form limsup prefactor target ((1-beta)/rho)^{1/(1-beta)} for a
// vanishing-dope spec with delta < 0.  Throws std::invalid_argument when the
// spec is outside that family (delta >= 0 or wrong dope kind).
double limsup_prefactor_target(const EnvironmentSpec& spec);

struct LimsupProbeRow {
  EnvironmentSpec spec;
  double maxRatio = 0.0;  // max over replicas of M(T) / (log T)^{1/(1-beta)}
  double target = 0.0;    // closed-form prefactor target
  int64_t replicas = 0;
};

// For each spec: sample `replicas` fresh environments (seeds derived from
// spec.seed), run maxSteps steps each, and report the maximal normalized
// running maximum against the closed-form target.  A probe, not an
// estimator: limsup convergence is slow and no acceptance tolerance is
// implied beyond what the caller asserts.
std::vector<LimsupProbeRow> limsup_constant_probe(
    const std::vector<EnvironmentSpec>& specs, int64_t maxSteps,
    int64_t replicas);

}  // namespace rwre
