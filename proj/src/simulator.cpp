#include "rwre/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rwre {

std::vector<int64_t> checkpoint_grid(int64_t maxSteps, double ratio) {
  if (maxSteps < 1) {
    throw std::invalid_argument("checkpoint_grid: maxSteps must be >= 1");
  }
  if (!(ratio > 1.0)) {
    throw std::invalid_argument("checkpoint_grid: ratio must be > 1");
  }
  std::vector<int64_t> grid;
  int64_t t = 1;
  while (t < maxSteps) {
    grid.push_back(t);
    t = static_cast<int64_t>(std::ceil(static_cast<double>(t) * ratio));
  }
  grid.push_back(maxSteps);
  return grid;
}

TrajectoryStats run_trajectory(const Environment& env, int64_t maxSteps,
                               double checkpointRatio, CounterStream stream) {
  if (env.size() < 2) {
    throw std::invalid_argument(
        "run_trajectory: environment must have at least 2 sites");
  }

  TrajectoryStats stats;
  stats.checkpoints = checkpoint_grid(maxSteps, checkpointRatio);
  stats.runningMax.reserve(stats.checkpoints.size());
  stats.seed = stream.key();

  // Step probabilities, filled on first visit; the visited prefix is
  // contiguous, so the watermark is just the current maximum level + 1.
  std::vector<double> pLeft(static_cast<size_t>(env.size()));
  double* const pl = pLeft.data();
  pl[0] = env.p_left(0);

  const int64_t edge = env.size() - 1;
  int64_t x = 0;
  int64_t maxLevel = 0;
  size_t cpIndex = 0;
  int64_t nextCp = stats.checkpoints[0];

  const auto step = [&](int64_t tNow, double u) {
    // Branch-free move (the draw is near 50/50 in the regimes of interest, so
    // a conditional jump here would mispredict half the time): left steps
    // clamp at the origin, where the leftward mass becomes the holding move.
    const int64_t goLeft = static_cast<int64_t>(u < pl[x]);
    x += 1 - goLeft * (1 + static_cast<int64_t>(x != 0));
    if (x > maxLevel) [[unlikely]] {
      maxLevel = x;
      stats.firstHitTime.push_back(tNow);
      if (x >= edge) throw EnvironmentExhaustedError(tNow, x);
      pl[x] = env.p_left(x);
    }
    if (tNow == nextCp) [[unlikely]] {
      stats.runningMax.push_back(maxLevel);
      ++cpIndex;
      nextCp = cpIndex < stats.checkpoints.size()
                   ? stats.checkpoints[cpIndex]
                   : std::numeric_limits<int64_t>::max();
    }
  };

  // Draws are taken four at a time so their (independent) mixes pipeline;
  // the sequence of draws is exactly the one-per-step sequence.
  int64_t t = 0;
  for (const int64_t runway = maxSteps & ~int64_t{3}; t < runway;) {
    double us[4];
    stream.next_unit_open4(us);
    step(t + 1, us[0]);
    step(t + 2, us[1]);
    step(t + 3, us[2]);
    step(t + 4, us[3]);
    t += 4;
  }
  while (t < maxSteps) {
    ++t;
    step(t, stream.next_unit_open());
  }
  stats.steps = maxSteps;
  return stats;
}

EnvelopeFit fit_envelope(const TrajectoryStats& stats) {
  constexpr int64_t kMinFitTime = 10000;
  constexpr size_t kMinUsable = 8;

  const size_t count = stats.checkpoints.size();
  if (stats.runningMax.size() != count) {
    throw std::invalid_argument(
        "fit_envelope: checkpoint and running-max arrays disagree");
  }
  size_t firstUsable = 0;
  while (firstUsable < count && stats.checkpoints[firstUsable] < kMinFitTime) {
    ++firstUsable;
  }
  const size_t usable = count - firstUsable;
  if (usable < kMinUsable) {
    throw std::invalid_argument(
        "fit_envelope: needs at least 8 checkpoints at t >= 10^4, have " +
        std::to_string(usable));
  }

  EnvelopeFit fit;
  fit.windowBegin = firstUsable + usable / 2;  // top half of the usable range
  fit.windowEnd = count;

  int64_t minM = std::numeric_limits<int64_t>::max();
  int64_t maxM = std::numeric_limits<int64_t>::min();
  for (size_t i = fit.windowBegin; i < fit.windowEnd; ++i) {
    minM = std::min(minM, stats.runningMax[i]);
    maxM = std::max(maxM, stats.runningMax[i]);
  }
  if (minM == maxM) {
    fit.degenerate = true;
    fit.theta = 0.0;
    fit.prefactor = static_cast<double>(maxM);
    fit.rSquared = 0.0;
    return fit;
  }

  // Least squares of y = log M against z = log log t.
  double sz = 0.0, sy = 0.0, szz = 0.0, szy = 0.0, syy = 0.0;
  const double n = static_cast<double>(fit.windowEnd - fit.windowBegin);
  for (size_t i = fit.windowBegin; i < fit.windowEnd; ++i) {
    const double z =
        std::log(std::log(static_cast<double>(stats.checkpoints[i])));
    const double y = std::log(static_cast<double>(std::max<int64_t>(
        stats.runningMax[i], 1)));
    sz += z;
    sy += y;
    szz += z * z;
    szy += z * y;
    syy += y * y;
  }
  const double varZ = szz - sz * sz / n;
  const double covZY = szy - sz * sy / n;
  const double varY = syy - sy * sy / n;
  fit.theta = covZY / varZ;
  fit.prefactor = std::exp((sy - fit.theta * sz) / n);
  fit.rSquared = varY > 0.0 ? (covZY * covZY) / (varZ * varY) : 1.0;
  return fit;
}

double limsup_prefactor_target(const EnvironmentSpec& spec) {
  if (spec.dope.kind() != DopeKind::kPowerLaw) {
    throw std::invalid_argument(
        "limsup_prefactor_target: needs the vanishing power-law dope");
  }
  if (!(spec.delta < 0.0)) {
    throw std::invalid_argument(
        "limsup_prefactor_target: needs delta < 0 (inward systematic "
        "drift); the envelope constant is undefined otherwise");
  }
  const double beta = spec.dope.beta();
  const double rho = spec.rho();  // > 0 for delta < 0
  return std::pow((1.0 - beta) / rho, 1.0 / (1.0 - beta));
}

std::vector<LimsupProbeRow> limsup_constant_probe(
    const std::vector<EnvironmentSpec>& specs, int64_t maxSteps,
    int64_t replicas) {
  if (maxSteps < 2 || replicas < 1) {
    throw std::invalid_argument(
        "limsup_constant_probe: needs maxSteps >= 2 and replicas >= 1");
  }
  std::vector<LimsupProbeRow> rows;
  rows.reserve(specs.size());
  for (const EnvironmentSpec& spec : specs) {
    LimsupProbeRow row;
    row.spec = spec;
    row.target = limsup_prefactor_target(spec);
    row.replicas = replicas;

    const double beta = spec.dope.beta();
    const double norm =
        std::pow(std::log(static_cast<double>(maxSteps)), 1.0 / (1.0 - beta));
    for (int64_t r = 0; r < replicas; ++r) {
      EnvironmentSpec envSpec = spec;
      envSpec.seed =
          derive_seed(spec.seed, StreamDomain::kExperiment,
                      static_cast<uint64_t>(r));
      const Environment env = sample_environment(envSpec);
      CounterStream walk = derive_stream(spec.seed, StreamDomain::kWalkReplica,
                                         static_cast<uint64_t>(r));
      const TrajectoryStats stats =
          run_trajectory(env, maxSteps, kDefaultCheckpointRatio, walk);
      const double ratio =
          static_cast<double>(stats.runningMax.back()) / norm;
      row.maxRatio = std::max(row.maxRatio, ratio);
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace rwre
