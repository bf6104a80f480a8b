#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "rwre/environment.hpp"
#include "rwre/functionals.hpp"
#include "rwre/oracle.hpp"

using namespace rwre;

namespace {

Environment env_from_lambdas(std::vector<double> lambdas) {
  EnvironmentSpec spec;
  spec.delta = 0.0;
  spec.dope = DopeProfile::Zero();
  spec.zeta = GaussianZeta{1.0};
  spec.length = static_cast<int64_t>(lambdas.size());
  spec.seed = 0;
  std::vector<uint8_t> chi(lambdas.size(), 0);
  return Environment(spec, std::move(lambdas), std::move(chi));
}

}  // namespace

TEST_CASE("oracle reproduces hand-closed hitting times") {
  // Driftless, target 3: E[tau_3] = 12.
  {
    const Environment env = env_from_lambdas({0.0, 0.0, 0.0});
    CHECK(hitting_time_oracle(env, 3) ==
          doctest::Approx(std::log(12.0)).epsilon(1e-12));
  }
  // Outward drift (p=1/3): E[tau_2] = 15/4.
  {
    const Environment env =
        env_from_lambdas({-std::log(2.0), -std::log(2.0)});
    CHECK(hitting_time_oracle(env, 2) ==
          doctest::Approx(std::log(3.75)).epsilon(1e-12));
  }
  // Single site: T(1) = 1/q_0, i.e. log T(1) = log(1 + e^{lambda_0}).
  {
    for (const double lambda : {-2.0, -0.3, 0.0, 0.7, 3.0}) {
      const Environment env = env_from_lambdas({lambda});
      CHECK(hitting_time_oracle(env, 1) ==
            doctest::Approx(std::log1p(std::exp(lambda))).epsilon(1e-12));
    }
  }
}

TEST_CASE("oracle agrees with the log-space recurrences at every level") {
  auto agree = [](const Environment& env, int64_t maxLevel) {
    const QuenchedFunctionals fn = compute(env, maxLevel);
    const HittingTimeOracle oracle(env, maxLevel);
    for (int64_t n = 1; n <= maxLevel; ++n) {
      const double viaRecurrence = fn.logT[static_cast<size_t>(n)];
      const double viaSolve = oracle.log_expected_hitting_time(n);
      const double tol = 1e-10 * std::max(1.0, std::abs(viaSolve));
      CHECK(std::abs(viaRecurrence - viaSolve) <= tol);
    }
  };

  EnvironmentSpec spec;
  spec.length = 200;

  spec.delta = 0.0;
  spec.dope = DopeProfile::Zero();
  spec.zeta = GaussianZeta{1.0};
  spec.seed = 1001;
  agree(sample_environment(spec), 200);

  spec.zeta = RademacherZeta{};
  spec.seed = 1002;
  agree(sample_environment(spec), 200);

  spec.delta = 0.5;
  spec.dope = DopeProfile::PowerLaw(0.3);
  spec.zeta = HeavySymmetricZeta{1.5, 0.5};
  spec.seed = 1003;
  agree(sample_environment(spec), 200);

  spec.delta = -0.5;
  spec.dope = DopeProfile::OneMinusPowerLaw(0.7);
  spec.zeta = HeavyAsymmetricZeta{1.5, 0.5};
  spec.seed = 1004;
  agree(sample_environment(spec), 200);
}

TEST_CASE("oracle handles strong pulls where T blows past double range") {
  // lambda = +4 at every site: T(n) ~ e^{4n}, far beyond double for n = 300.
  // The precision ladder must climb to its top rung to keep the elimination
  // conditioned across the e^{1200} dynamic range.
  const Environment env =
      env_from_lambdas(std::vector<double>(300, 4.0));
  const QuenchedFunctionals fn = compute(env, 300);
  const HittingTimeOracle oracle(env, 300);
  CHECK(oracle.decimal_digits() == 2000);
  for (const int64_t n : {1, 10, 100, 300}) {
    const double viaSolve = oracle.log_expected_hitting_time(n);
    const double viaRecurrence = fn.logT[static_cast<size_t>(n)];
    CHECK(std::abs(viaSolve - viaRecurrence) <=
          1e-10 * std::max(1.0, std::abs(viaSolve)));
  }
  CHECK(oracle.log_expected_hitting_time(300) > 1000.0);
}

TEST_CASE("one solve recovers every level via hitting-time additivity") {
  EnvironmentSpec spec;
  spec.delta = -0.4;
  spec.dope = DopeProfile::PowerLaw(0.5);
  spec.zeta = HeavySymmetricZeta{1.2, 0.5};
  spec.length = 200;
  spec.seed = 7777;
  const Environment env = sample_environment(spec);
  const HittingTimeOracle oracle(env, 200);
  const std::vector<double> all = oracle.log_hitting_times_upto(200);
  REQUIRE(all.size() == 201);
  CHECK(all[0] == -std::numeric_limits<double>::infinity());
  // Spot-check against fully independent per-level solves.
  for (const int64_t m : {1, 3, 50, 137, 200}) {
    CHECK(std::abs(all[static_cast<size_t>(m)] -
                   oracle.log_expected_hitting_time(m)) <=
          1e-11 * std::max(1.0, std::abs(all[static_cast<size_t>(m)])));
  }
  // And against the recurrence path at every level.
  const QuenchedFunctionals fn = compute(env, 200);
  for (int64_t m = 1; m <= 200; ++m) {
    const double tol =
        1e-10 * std::max(1.0, std::abs(all[static_cast<size_t>(m)]));
    CHECK(std::abs(all[static_cast<size_t>(m)] -
                   fn.logT[static_cast<size_t>(m)]) <= tol);
  }
}

TEST_CASE("oracle exercises its pivoting path on lopsided coefficients") {
  // Tiny q_0 forces a row interchange in the first elimination step.
  const Environment env = env_from_lambdas({9.0, -1.0, 2.0, -3.0, 5.0});
  const QuenchedFunctionals fn = compute(env, 5);
  const HittingTimeOracle oracle(env, 5);
  for (int64_t n = 1; n <= 5; ++n) {
    CHECK(oracle.log_expected_hitting_time(n) ==
          doctest::Approx(fn.logT[static_cast<size_t>(n)]).epsilon(1e-12));
  }
}

TEST_CASE("oracle refuses out-of-range requests") {
  const Environment env = env_from_lambdas(std::vector<double>(10, 0.0));
  CHECK_THROWS_AS(HittingTimeOracle(env, 0), std::invalid_argument);
  CHECK_THROWS_AS(HittingTimeOracle(env, 11), std::invalid_argument);

  const Environment big =
      env_from_lambdas(std::vector<double>(2500, 0.0));
  CHECK_THROWS_AS(HittingTimeOracle(big, 2500), std::invalid_argument);
  CHECK_NOTHROW(HittingTimeOracle(big, 2000));

  const HittingTimeOracle oracle(env, 10);
  CHECK_THROWS_AS(oracle.log_expected_hitting_time(0), std::invalid_argument);
  CHECK_THROWS_AS(oracle.log_expected_hitting_time(11), std::invalid_argument);
}

TEST_CASE("oracle reports range exceeded when a site is an impassable wall") {
  // log-odds of 2e9 overflow even the extended-precision exponent range; the
  // outward step probability rounds to exact zero and the truncated system
  // would describe a different chain, so construction must refuse.
  const Environment env = env_from_lambdas({0.5, 2e9, 0.5});
  CHECK_THROWS_AS(HittingTimeOracle(env, 3), std::range_error);
}
