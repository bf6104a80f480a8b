#include "rwre/classifier.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "rwre/environment.hpp"
#include "rwre/functionals.hpp"
#include "test_support.hpp"

using namespace rwre;
using test::constant_env;
using test::env_from_lambdas;

namespace {

EnvironmentSpec make_spec(double delta, DopeProfile dope, ZetaRegime zeta,
                          int64_t length = 1000, uint64_t seed = 1) {
  EnvironmentSpec spec;
  spec.delta = delta;
  spec.dope = dope;
  spec.zeta = zeta;
  spec.length = length;
  spec.seed = seed;
  return spec;
}

PhaseVerdict classify_constant(double lambda, int64_t n) {
  const Environment env = constant_env(lambda, n);
  return classify(env, compute(env, n));
}

}  // namespace

TEST_CASE("constant drifts get the exact verdict at every usable truncation") {
  for (const int64_t n : {1000L, 3000L, 10000L}) {
    CAPTURE(n);
    // Drift away from the origin: f converges, the potential sinks linearly.
    CHECK(classify_constant(-std::log(2.0), n).empirical ==
          EmpiricalPhase::kTransient);
    // Drift toward the origin: sum e^{-S} converges.
    CHECK(classify_constant(std::log(2.0), n).empirical ==
          EmpiricalPhase::kPositiveRecurrent);
    // Driftless: f and sum e^{-S} both grow linearly.
    CHECK(classify_constant(0.0, n).empirical ==
          EmpiricalPhase::kNullRecurrent);
  }
}

TEST_CASE("short truncations are forced to Indeterminate") {
  CHECK(classify_constant(-std::log(2.0), 999).empirical ==
        EmpiricalPhase::kIndeterminate);
  CHECK(classify_constant(std::log(2.0), 500).empirical ==
        EmpiricalPhase::kIndeterminate);
  CHECK(classify_constant(0.0, 1).empirical ==
        EmpiricalPhase::kIndeterminate);
}

TEST_CASE("driftless evidence has the closed-form growth statistics") {
  const int64_t n = 10000;
  const Environment env = constant_env(0.0, n);
  const PhaseVerdict verdict = classify(env, compute(env, n));
  // f(m) = m + 1, so the second-half growth of log f is exactly log 2.
  CHECK(verdict.evidence.logFGrowth ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));
  // S is identically zero: the running maximum never moves.
  CHECK(verdict.evidence.maxPrefixGrowth == 0.0);
  // The last half contributes n/2 unit terms to sum e^{-S}.
  CHECK(verdict.evidence.invDTailSum ==
        doctest::Approx(std::log(n / 2.0)).epsilon(1e-12));
  CHECK(verdict.truncation == n);
}

TEST_CASE("conflicting signals yield Indeterminate") {
  // Hand-built potential: an early deep dip (so sum e^{-S} is dominated by
  // the first half and its late growth stalls) followed by a slow, ordered
  // descent through the quarter-point gates (so the transient signal also
  // fires). The classifier must refuse to pick a side.
  std::vector<double> lambdas;
  lambdas.reserve(2000);
  for (int i = 0; i < 500; ++i) lambdas.push_back(-5.0 / 500.0);
  for (int i = 0; i < 250; ++i) lambdas.push_back(-45.0 / 250.0);
  for (int i = 0; i < 250; ++i) lambdas.push_back(43.5 / 250.0);
  for (int i = 0; i < 500; ++i) lambdas.push_back(-0.7 / 500.0);
  for (int i = 0; i < 500; ++i) lambdas.push_back(-1.3 / 500.0);
  const Environment env = env_from_lambdas(std::move(lambdas));
  const PhaseVerdict verdict = classify(env, compute(env, 2000));
  CHECK(verdict.empirical == EmpiricalPhase::kIndeterminate);
  // Sanity on the construction: the harmonic scale did stall...
  CHECK(verdict.evidence.logFGrowth < std::log(1.05));
  // ...and the first-half dip dwarfs the tail of sum e^{-S}.
  CHECK(verdict.evidence.invDTailSum < 20.0);
}

TEST_CASE("classify rejects truncations beyond the environment") {
  const Environment big = constant_env(0.0, 2000);
  const QuenchedFunctionals fn = compute(big, 2000);
  const Environment small = constant_env(0.0, 1000);
  CHECK_THROWS_AS(classify(small, fn), std::invalid_argument);
}

TEST_CASE("classify is deterministic") {
  const auto spec = make_spec(0.5, DopeProfile::PowerLaw(0.3),
                              HeavySymmetricZeta{1.5, 0.5}, 5000, 77);
  const Environment env = sample_environment(spec);
  const QuenchedFunctionals fn = compute(env, 5000);
  const PhaseVerdict a = classify(env, fn);
  const PhaseVerdict b = classify(env, fn);
  CHECK(a.empirical == b.empirical);
  CHECK(a.predicted == b.predicted);
  CHECK(a.evidence.logFGrowth == b.evidence.logFGrowth);
  CHECK(a.evidence.maxPrefixGrowth == b.evidence.maxPrefixGrowth);
  CHECK(a.evidence.invDTailSum == b.evidence.invDTailSum);
}

TEST_CASE("phase table: undoped families") {
  CHECK(predicted_regime(make_spec(0.0, DopeProfile::Zero(),
                                   RademacherZeta{})) ==
        PredictedPhase::kRecurrentNull);
  CHECK(predicted_regime(make_spec(0.3, DopeProfile::Zero(),
                                   GaussianZeta{2.0})) ==
        PredictedPhase::kRecurrentNull);
  CHECK(predicted_regime(make_spec(-0.9, DopeProfile::Zero(),
                                   HeavySymmetricZeta{0.7, 0.5})) ==
        PredictedPhase::kRecurrentNull);
  CHECK(predicted_regime(make_spec(0.0, DopeProfile::Zero(),
                                   HeavyAsymmetricZeta{1.5, 0.5})) ==
        PredictedPhase::kTransient);
}

TEST_CASE("phase table: vanishing dope with finite-variance steps") {
  const auto pl = [](double beta) { return DopeProfile::PowerLaw(beta); };
  // Below the critical exponent the systematic drift decides.
  CHECK(predicted_regime(make_spec(0.5, pl(0.3), RademacherZeta{})) ==
        PredictedPhase::kTransient);
  CHECK(predicted_regime(make_spec(-0.5, pl(0.3), RademacherZeta{})) ==
        PredictedPhase::kRecurrent);
  CHECK(predicted_regime(make_spec(0.0, pl(0.3), RademacherZeta{})) ==
        PredictedPhase::kNotCovered);
  // Above it the walk is recurrent for any drift.
  CHECK(predicted_regime(make_spec(0.9, pl(0.7), GaussianZeta{1.0})) ==
        PredictedPhase::kRecurrent);
  CHECK(predicted_regime(make_spec(0.0, pl(0.7), GaussianZeta{1.0})) ==
        PredictedPhase::kRecurrent);
  // Exactly on the surface: Boundary, whatever the drift.
  CHECK(predicted_regime(make_spec(0.5, pl(0.5), RademacherZeta{})) ==
        PredictedPhase::kBoundary);
  CHECK(predicted_regime(make_spec(-0.5, pl(0.5 + 1e-10),
                                   GaussianZeta{1.0})) ==
        PredictedPhase::kBoundary);
}

TEST_CASE("phase table: vanishing dope with symmetric heavy steps") {
  const auto pl = [](double beta) { return DopeProfile::PowerLaw(beta); };
  const HeavySymmetricZeta heavy{1.5, 0.5};  // critical beta = 1/3
  CHECK(predicted_regime(make_spec(0.9, pl(0.6), heavy)) ==
        PredictedPhase::kRecurrent);
  CHECK(predicted_regime(make_spec(0.5, pl(0.2), heavy)) ==
        PredictedPhase::kTransient);
  CHECK(predicted_regime(make_spec(-0.5, pl(0.2), heavy)) ==
        PredictedPhase::kRecurrent);
  CHECK(predicted_regime(make_spec(0.5, pl(1.0 / 3.0), heavy)) ==
        PredictedPhase::kBoundary);
  // Tail index at or below 1 is outside the family.
  CHECK(predicted_regime(make_spec(0.5, pl(0.2),
                                   HeavySymmetricZeta{1.0, 0.5})) ==
        PredictedPhase::kNotCovered);
}

TEST_CASE("phase table: saturating dope with symmetric heavy steps") {
  const auto om = [](double beta) { return DopeProfile::OneMinusPowerLaw(beta); };
  const HeavySymmetricZeta heavy{0.5, 0.5};  // critical beta = 1/2
  CHECK(predicted_regime(make_spec(-0.5, om(0.2), heavy)) ==
        PredictedPhase::kRecurrent);
  CHECK(predicted_regime(make_spec(0.9, om(0.2), heavy)) ==
        PredictedPhase::kRecurrent);
  CHECK(predicted_regime(make_spec(0.5, om(0.7), heavy)) ==
        PredictedPhase::kTransient);
  CHECK(predicted_regime(make_spec(-0.5, om(0.7), heavy)) ==
        PredictedPhase::kRecurrent);
  CHECK(predicted_regime(make_spec(0.0, om(0.7), heavy)) ==
        PredictedPhase::kNotCovered);
  CHECK(predicted_regime(make_spec(0.5, om(0.5), heavy)) ==
        PredictedPhase::kBoundary);
  // alpha >= 1 leaves the family.
  CHECK(predicted_regime(make_spec(0.5, om(0.7),
                                   HeavySymmetricZeta{1.2, 0.5})) ==
        PredictedPhase::kNotCovered);
}

TEST_CASE("phase table: kinds outside the declared families") {
  CHECK(predicted_regime(make_spec(0.5, DopeProfile::One(),
                                   RademacherZeta{})) ==
        PredictedPhase::kNotCovered);
  CHECK(predicted_regime(make_spec(0.5, DopeProfile::Constant(0.3),
                                   RademacherZeta{})) ==
        PredictedPhase::kNotCovered);
  CHECK(predicted_regime(make_spec(0.5, DopeProfile::PowerLaw(0.3),
                                   HeavyAsymmetricZeta{1.5, 0.5})) ==
        PredictedPhase::kNotCovered);
  CHECK(predicted_regime(make_spec(0.5, DopeProfile::OneMinusPowerLaw(0.3),
                                   GaussianZeta{1.0})) ==
        PredictedPhase::kNotCovered);
}

TEST_CASE("agreement pools the recurrence flavours") {
  CHECK(phases_agree(EmpiricalPhase::kTransient, PredictedPhase::kTransient));
  CHECK(phases_agree(EmpiricalPhase::kNullRecurrent,
                     PredictedPhase::kRecurrent));
  CHECK(phases_agree(EmpiricalPhase::kPositiveRecurrent,
                     PredictedPhase::kRecurrent));
  CHECK(phases_agree(EmpiricalPhase::kNullRecurrent,
                     PredictedPhase::kRecurrentNull));
  CHECK(phases_agree(EmpiricalPhase::kPositiveRecurrent,
                     PredictedPhase::kRecurrentNull));
  CHECK_FALSE(phases_agree(EmpiricalPhase::kTransient,
                           PredictedPhase::kRecurrent));
  CHECK_FALSE(phases_agree(EmpiricalPhase::kNullRecurrent,
                           PredictedPhase::kTransient));
  CHECK_FALSE(phases_agree(EmpiricalPhase::kIndeterminate,
                           PredictedPhase::kRecurrent));
  CHECK_FALSE(phases_agree(EmpiricalPhase::kIndeterminate,
                           PredictedPhase::kTransient));
  CHECK_FALSE(phases_agree(EmpiricalPhase::kTransient,
                           PredictedPhase::kBoundary));
  CHECK_FALSE(phases_agree(EmpiricalPhase::kNullRecurrent,
                           PredictedPhase::kNotCovered));
}

TEST_CASE("sampled environments: drift-decided transient cell") {
  // Sparse outward systematic drift over a symmetric background, below the
  // critical dope exponent: almost surely transient, and the classifier
  // should see it in nearly every realization at this depth.
  int transient = 0;
  const int reps = 10;
  for (int r = 0; r < reps; ++r) {
    const auto spec =
        make_spec(0.5, DopeProfile::PowerLaw(0.2), RademacherZeta{}, 100000,
                  4242 + static_cast<uint64_t>(r));
    const Environment env = sample_environment(spec);
    const PhaseVerdict verdict = classify(env, compute(env, spec.length));
    CHECK(verdict.predicted == PredictedPhase::kTransient);
    transient += verdict.empirical == EmpiricalPhase::kTransient ? 1 : 0;
  }
  CHECK(transient >= 8);
}

TEST_CASE("sampled environments: undoped symmetric cell stays recurrent") {
  int recurrent = 0;
  const int reps = 10;
  for (int r = 0; r < reps; ++r) {
    const auto spec = make_spec(0.0, DopeProfile::Zero(), GaussianZeta{1.0},
                                100000, 9000 + static_cast<uint64_t>(r));
    const Environment env = sample_environment(spec);
    const PhaseVerdict verdict = classify(env, compute(env, spec.length));
    CHECK(verdict.predicted == PredictedPhase::kRecurrentNull);
    recurrent += phases_agree(verdict.empirical, verdict.predicted) ? 1 : 0;
  }
  CHECK(recurrent >= 8);
}
