#include "rwre/limit_laws.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <variant>

namespace rwre {

namespace {

// Dyadic grid 1, 2, 4, ..., ending exactly at `horizon`.
std::vector<int64_t> dyadic_grid(int64_t horizon) {
  std::vector<int64_t> grid;
  for (int64_t t = 1; t < horizon; t *= 2) grid.push_back(t);
  grid.push_back(horizon);
  return grid;
}

// Indices of checkpoints usable for log log statistics (t >= 16).
std::vector<size_t> usable_indices(const std::vector<int64_t>& checkpoints) {
  std::vector<size_t> idx;
  for (size_t i = 0; i < checkpoints.size(); ++i) {
    if (checkpoints[i] >= kMinStatisticTime) idx.push_back(i);
  }
  return idx;
}

double heavy_alpha(const ZetaRegime& regime, const char* who) {
  if (const auto* h = std::get_if<HeavySymmetricZeta>(&regime)) {
    return h->alpha;
  }
  throw std::invalid_argument(std::string(who) +
                              ": needs the symmetric heavy-tailed regime");
}

void require_finite_variance(const ZetaRegime& regime, const char* who) {
  if (!is_finite_variance(regime)) {
    throw std::invalid_argument(std::string(who) +
                                ": needs a finite-variance regime");
  }
}

void validate_replicas(int64_t replicas, const char* who) {
  if (replicas < 1) {
    throw std::invalid_argument(std::string(who) + ": replicas must be >= 1");
  }
}

CounterStream replica_stream(uint64_t seed, int64_t r) {
  return derive_stream(seed, StreamDomain::kLimitLaw,
                       static_cast<uint64_t>(r));
}

// Least-squares slope/intercept of y against x; points with y unusable
// (non-finite) are skipped by the caller.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  LineFit fit;
  fit.slope = (sxy - sx * sy / n) / (sxx - sx * sx / n);
  fit.intercept = (sy - fit.slope * sx) / n;
  return fit;
}

}  // namespace

SumPathStats sample_sum_path(const ZetaRegime& regime, int64_t horizon,
                             CounterStream stream) {
  if (horizon < 1) {
    throw std::invalid_argument("sample_sum_path: horizon must be >= 1");
  }
  validate_regime(regime);

  SumPathStats path;
  path.horizon = horizon;
  path.checkpoints = dyadic_grid(horizon);
  path.regime = regime;
  path.seed = stream.key();
  path.S.reserve(path.checkpoints.size());
  path.runningMaxS.reserve(path.checkpoints.size());
  path.runningMinS.reserve(path.checkpoints.size());
  path.runningMaxAbsS.reserve(path.checkpoints.size());

  double s = 0.0, maxS = 0.0, minS = 0.0, maxAbs = 0.0;
  size_t cp = 0;
  for (int64_t t = 1; t <= horizon; ++t) {
    s += sample_zeta(regime, stream);
    maxS = std::max(maxS, s);
    minS = std::min(minS, s);
    maxAbs = std::max(maxAbs, std::abs(s));
    if (t == path.checkpoints[cp]) {
      path.S.push_back(s);
      path.runningMaxS.push_back(maxS);
      path.runningMinS.push_back(minS);
      path.runningMaxAbsS.push_back(maxAbs);
      ++cp;
    }
  }
  return path;
}

double finite_variance_sigma(const ZetaRegime& regime) {
  if (std::holds_alternative<RademacherZeta>(regime)) return 1.0;
  if (const auto* g = std::get_if<GaussianZeta>(&regime)) return g->sigma;
  throw std::invalid_argument(
      "finite_variance_sigma: heavy-tailed regimes have no sigma");
}

RatioEnvelopeReport check_lil(const ZetaRegime& finiteVariance,
                              int64_t horizon, int64_t replicas,
                              uint64_t seed) {
  require_finite_variance(finiteVariance, "check_lil");
  validate_replicas(replicas, "check_lil");
  RatioEnvelopeReport report;
  if (horizon < kMinEnvelopeHorizon) {
    report.horizonTooShort = true;
    return report;
  }
  const double sigma = finite_variance_sigma(finiteVariance);
  for (int64_t r = 0; r < replicas; ++r) {
    CounterStream stream = replica_stream(seed, r);
    double s = 0.0;
    double best = -std::numeric_limits<double>::infinity();
    for (int64_t t = 1; t <= horizon; ++t) {
      s += sample_zeta(finiteVariance, stream);
      if (t < kMinStatisticTime) continue;
      const double td = static_cast<double>(t);
      const double norm =
          sigma * std::sqrt(2.0 * td * std::log(std::log(td)));
      best = std::max(best, s / norm);
    }
    report.maxRatio.push_back(best);
  }
  return report;
}

ExceedanceReport check_feller(const ZetaRegime& heavySymmetric,
                              int64_t horizon, double epsilon,
                              int64_t replicas, uint64_t seed) {
  const double alpha = heavy_alpha(heavySymmetric, "check_feller");
  validate_replicas(replicas, "check_feller");
  if (epsilon < 0.0) {
    throw std::invalid_argument("check_feller: epsilon must be >= 0");
  }
  ExceedanceReport report;
  if (horizon < kMinEnvelopeHorizon) {
    report.horizonTooShort = true;
    return report;
  }
  const int64_t decadeStart = horizon / 10;
  for (int64_t r = 0; r < replicas; ++r) {
    const SumPathStats path =
        sample_sum_path(heavySymmetric, horizon, replica_stream(seed, r));
    const auto usable = usable_indices(path.checkpoints);
    int64_t total = 0, tail = 0;
    double finalMargin = 0.0;
    for (size_t k = 0; k < usable.size(); ++k) {
      const size_t i = usable[k];
      const double t = static_cast<double>(path.checkpoints[i]);
      const double bound = std::pow(t, 1.0 / alpha) *
                           std::pow(std::log(t), 1.0 / alpha + epsilon);
      const bool exceeds = std::abs(path.S[i]) > bound;
      total += exceeds;
      tail += exceeds && path.checkpoints[i] > decadeStart;
      if (k + 1 == usable.size()) finalMargin = std::abs(path.S[i]) / bound;
    }
    report.totalExceedances.push_back(total);
    report.tailExceedances.push_back(tail);
    report.finalMargin.push_back(finalMargin);
  }
  return report;
}

namespace {

LowerBoundReport check_lower_envelope(const ZetaRegime& regime,
                                      int64_t horizon, double timeExponent,
                                      double logExponent, int64_t replicas,
                                      uint64_t seed) {
  LowerBoundReport report;
  if (horizon < kMinEnvelopeHorizon) {
    report.horizonTooShort = true;
    return report;
  }
  for (int64_t r = 0; r < replicas; ++r) {
    const SumPathStats path =
        sample_sum_path(regime, horizon, replica_stream(seed, r));
    const double t = static_cast<double>(horizon);
    const double bound =
        std::pow(t, timeExponent) * std::pow(std::log(t), logExponent);
    const double margin = path.runningMaxS.back() / bound;
    report.marginRatio.push_back(margin);
    report.holdsAtHorizon.push_back(margin >= 1.0 ? 1 : 0);
  }
  return report;
}

}  // namespace

LowerBoundReport check_hirsch(const ZetaRegime& finiteVariance,
                              int64_t horizon, double epsilon,
                              int64_t replicas, uint64_t seed) {
  require_finite_variance(finiteVariance, "check_hirsch");
  validate_replicas(replicas, "check_hirsch");
  if (epsilon <= 0.0) {
    throw std::invalid_argument("check_hirsch: epsilon must be > 0");
  }
  return check_lower_envelope(finiteVariance, horizon, 0.5, -1.0 - epsilon,
                              replicas, seed);
}

LowerBoundReport check_kz(const ZetaRegime& heavySymmetric, int64_t horizon,
                          double epsilon, int64_t replicas, uint64_t seed) {
  const double alpha = heavy_alpha(heavySymmetric, "check_kz");
  validate_replicas(replicas, "check_kz");
  if (epsilon <= 0.0) {
    throw std::invalid_argument("check_kz: epsilon must be > 0");
  }
  return check_lower_envelope(heavySymmetric, horizon, 1.0 / alpha,
                              -2.0 / alpha - epsilon, replicas, seed);
}

namespace {

LiminfProbeReport check_liminf_probe(const ZetaRegime& regime,
                                     int64_t horizon, double invExponent,
                                     double target, int64_t replicas,
                                     uint64_t seed, int64_t window) {
  LiminfProbeReport report;
  report.target = target;
  report.window = window;
  if (horizon < kMinLiminfHorizon) {
    report.horizonTooShort = true;
    return report;
  }
  for (int64_t r = 0; r < replicas; ++r) {
    const SumPathStats path =
        sample_sum_path(regime, horizon, replica_stream(seed, r));
    const auto usable = usable_indices(path.checkpoints);
    const size_t begin = usable.size() > static_cast<size_t>(window)
                             ? usable.size() - static_cast<size_t>(window)
                             : 0;
    double worst = std::numeric_limits<double>::infinity();
    for (size_t k = begin; k < usable.size(); ++k) {
      const size_t i = usable[k];
      const double t = static_cast<double>(path.checkpoints[i]);
      const double scale = std::pow(std::log(std::log(t)) / t, invExponent);
      worst = std::min(worst, scale * path.runningMaxAbsS[i]);
    }
    report.minStatistic.push_back(worst);
  }
  return report;
}

}  // namespace

LiminfProbeReport check_chung(const ZetaRegime& finiteVariance,
                              int64_t horizon, int64_t replicas, uint64_t seed,
                              int64_t window) {
  require_finite_variance(finiteVariance, "check_chung");
  validate_replicas(replicas, "check_chung");
  const double sigma = finite_variance_sigma(finiteVariance);
  const double target = std::numbers::pi * sigma / std::sqrt(8.0);
  return check_liminf_probe(finiteVariance, horizon, 0.5, target, replicas,
                            seed, window);
}

LiminfProbeReport check_em(const ZetaRegime& heavySymmetric, int64_t horizon,
                           int64_t replicas, uint64_t seed, int64_t window) {
  const double alpha = heavy_alpha(heavySymmetric, "check_em");
  validate_replicas(replicas, "check_em");
  return check_liminf_probe(heavySymmetric, horizon, 1.0 / alpha,
                            /*target=*/0.0, replicas, seed, window);
}

std::string to_string(DecompositionBranch branch) {
  switch (branch) {
    case DecompositionBranch::kDriftTermLeads:
      return "drift_term_leads";
    case DecompositionBranch::kResidualFiniteVariance:
      return "residual_finite_variance";
    case DecompositionBranch::kResidualHeavy:
      return "residual_heavy";
    case DecompositionBranch::kZeroDope:
      return "zero_dope";
    case DecompositionBranch::kNotCovered:
      return "not_covered";
  }
  throw std::logic_error("to_string: unknown decomposition branch");
}

namespace {

DecompositionBranch classify_decomposition(const EnvironmentSpec& spec) {
  if (spec.dope.kind() == DopeKind::kZero) {
    return DecompositionBranch::kZeroDope;
  }
  if (spec.dope.kind() != DopeKind::kPowerLaw) {
    return DecompositionBranch::kNotCovered;
  }
  const double beta = spec.dope.beta();
  if (is_finite_variance(spec.zeta)) {
    if (beta < 0.5 && spec.rho() != 0.0) {
      return DecompositionBranch::kDriftTermLeads;
    }
    if (beta > 0.5) return DecompositionBranch::kResidualFiniteVariance;
    return DecompositionBranch::kNotCovered;
  }
  if (const auto* h = std::get_if<HeavySymmetricZeta>(&spec.zeta)) {
    if (h->alpha <= 1.0 || h->alpha >= 2.0) {
      return DecompositionBranch::kNotCovered;
    }
    const double critical = 1.0 - 1.0 / h->alpha;
    if (beta < critical && spec.rho() != 0.0) {
      return DecompositionBranch::kDriftTermLeads;
    }
    if (beta > critical) return DecompositionBranch::kResidualHeavy;
  }
  return DecompositionBranch::kNotCovered;
}

}  // namespace

DecompositionReport check_sums_decomposition(const EnvironmentSpec& spec,
                                             int64_t horizon) {
  if (horizon < kMinStatisticTime) {
    throw std::invalid_argument(
        "check_sums_decomposition: horizon must be >= 16");
  }
  EnvironmentSpec streamed = spec;
  streamed.length = horizon;

  DecompositionReport report;
  report.branch = classify_decomposition(spec);
  report.checkpoints = dyadic_grid(horizon);

  EnvironmentStream sites(streamed);
  double sumLambda = 0.0, sumZeta = 0.0;
  size_t cp = 0;
  for (int64_t n = 1; n <= horizon; ++n) {
    const EnvironmentSite site = sites.next();
    sumLambda += site.lambda;
    sumZeta += site.zeta;
    if (n == report.checkpoints[cp]) {
      report.lambdaSum.push_back(sumLambda);
      report.zetaSum.push_back(sumZeta);
      report.residual.push_back(sumLambda - sumZeta);
      ++cp;
    }
  }

  if (report.branch == DecompositionBranch::kZeroDope ||
      report.branch == DecompositionBranch::kNotCovered) {
    return report;
  }

  // Fit log|statistic| against log n over the top half of usable checkpoints.
  const bool driftLeads =
      report.branch == DecompositionBranch::kDriftTermLeads;
  const std::vector<double>& series =
      driftLeads ? report.lambdaSum : report.residual;
  const auto usable = usable_indices(report.checkpoints);
  std::vector<double> xs, ys;
  for (size_t k = usable.size() / 2; k < usable.size(); ++k) {
    const size_t i = usable[k];
    if (series[i] == 0.0) continue;  // log undefined; a zero residual point
    xs.push_back(std::log(static_cast<double>(report.checkpoints[i])));
    ys.push_back(std::log(std::abs(series[i])));
  }
  if (xs.size() < 2) return report;  // nothing to fit; data still reported

  const LineFit fit = fit_line(xs, ys);
  report.slope = fit.slope;
  const double beta = spec.dope.beta();
  const double cBeta = 1.0 / (1.0 - beta);
  if (driftLeads) {
    report.coefficient = (report.lambdaSum.back() < 0.0 ? -1.0 : 1.0) *
                         std::exp(fit.intercept);
    report.targetExponent = 1.0 - beta;
    report.targetCoefficient = spec.rho() * cBeta;
  } else if (report.branch == DecompositionBranch::kResidualFiniteVariance) {
    report.targetExponent = 1.0 - beta;
  } else {
    report.targetExponent =
        1.0 / std::get<HeavySymmetricZeta>(spec.zeta).alpha;
  }
  return report;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) {
    throw std::invalid_argument("ks_two_sample: samples must be non-empty");
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  double d = 0.0;
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    // Advance past every copy of the smaller value in both samples before
    // reading the gap: with discrete (lattice-valued) data, comparing the
    // empirical CDFs mid-tie would report a spurious jump at each atom.
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na -
                             static_cast<double>(j) / nb));
  }
  return d;
}

double symmetry_ks_statistic(const ZetaRegime& regime, int64_t horizon,
                             int64_t replicas, uint64_t seed) {
  validate_regime(regime);
  if (horizon < 1 || replicas < 2) {
    throw std::invalid_argument(
        "symmetry_ks_statistic: needs horizon >= 1 and replicas >= 2");
  }
  std::vector<double> direct, mirrored;
  direct.reserve(static_cast<size_t>(replicas));
  mirrored.reserve(static_cast<size_t>(replicas));
  for (int64_t r = 0; r < replicas; ++r) {
    CounterStream sa = replica_stream(seed, r);
    CounterStream sb = replica_stream(seed, replicas + r);
    double a = 0.0, b = 0.0;
    for (int64_t t = 0; t < horizon; ++t) {
      a += sample_zeta(regime, sa);
      b += sample_zeta(regime, sb);
    }
    direct.push_back(a);
    mirrored.push_back(-b);
  }
  return ks_two_sample(std::move(direct), std::move(mirrored));
}

}  // namespace rwre
