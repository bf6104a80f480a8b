#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "rwre/environment.hpp"
#include "rwre/rng.hpp"

using namespace rwre;

TEST_CASE("dope profiles evaluate their closed forms") {
  const DopeProfile zero = DopeProfile::Zero();
  const DopeProfile one = DopeProfile::One();
  const DopeProfile pl = DopeProfile::PowerLaw(0.5);
  const DopeProfile om = DopeProfile::OneMinusPowerLaw(0.5);
  const DopeProfile cst = DopeProfile::Constant(0.25);

  CHECK(zero.at(0) == 0.0);
  CHECK(zero.at(12345) == 0.0);
  CHECK(one.at(0) == 1.0);
  CHECK(one.at(12345) == 1.0);

  CHECK(pl.at(0) == 1.0);  // the profile is capped at probability 1 here
  CHECK(pl.at(1) == 1.0);
  CHECK(pl.at(4) == doctest::Approx(0.5));
  CHECK(pl.at(100) == doctest::Approx(0.1));

  CHECK(om.at(0) == 0.0);  // complementary convention at the origin
  CHECK(om.at(1) == 0.0);
  CHECK(om.at(4) == doctest::Approx(0.5));
  CHECK(om.at(100) == doctest::Approx(0.9));

  CHECK(cst.at(0) == 0.25);
  CHECK(cst.at(999) == 0.25);

  CHECK_THROWS_AS(DopeProfile::PowerLaw(0.0), std::invalid_argument);
  CHECK_THROWS_AS(DopeProfile::PowerLaw(1.0), std::invalid_argument);
  CHECK_THROWS_AS(DopeProfile::Constant(1.5), std::invalid_argument);
  CHECK_THROWS_AS(zero.at(-1), std::invalid_argument);
}

TEST_CASE("fully doped environment is deterministic: lambda == rho everywhere") {
  EnvironmentSpec spec;
  spec.delta = -0.5;  // rho = log((1+0.5)/(1-0.5)) = log 3
  spec.dope = DopeProfile::One();
  spec.zeta = RademacherZeta{};
  spec.length = 3;
  spec.seed = 17;
  const Environment env = sample_environment(spec);
  REQUIRE(env.size() == 3);
  for (int64_t j = 0; j < 3; ++j) {
    CHECK(env.chi(j));
    CHECK(env.lambda(j) == doctest::Approx(std::log(3.0)).epsilon(1e-15));
  }
}

TEST_CASE("rho has the opposite sign to delta and vanishes with it") {
  EnvironmentSpec spec;
  spec.dope = DopeProfile::Zero();
  spec.zeta = RademacherZeta{};
  spec.length = 1;
  spec.seed = 1;
  spec.delta = 0.25;
  CHECK(spec.rho() < 0.0);
  spec.delta = -0.25;
  CHECK(spec.rho() > 0.0);
  spec.delta = 0.0;
  CHECK(spec.rho() == 0.0);
}

TEST_CASE("environment generation is prefix-stable: extending the length "
          "does not change earlier sites") {
  EnvironmentSpec spec;
  spec.delta = 0.3;
  spec.dope = DopeProfile::PowerLaw(0.4);
  spec.zeta = GaussianZeta{1.0};
  spec.seed = 90210;

  spec.length = 500;
  const Environment small = sample_environment(spec);
  spec.length = 2000;
  const Environment large = sample_environment(spec);
  for (int64_t j = 0; j < 500; ++j) {
    CHECK(small.lambda(j) == large.lambda(j));  // bit-exact
    CHECK(small.chi(j) == large.chi(j));
  }
}

TEST_CASE("stream and materialized environment agree site by site") {
  EnvironmentSpec spec;
  spec.delta = -0.2;
  spec.dope = DopeProfile::PowerLaw(0.7);
  spec.zeta = HeavySymmetricZeta{1.5, 0.5};
  spec.length = 300;
  spec.seed = 5150;
  const Environment env = sample_environment(spec);
  EnvironmentStream stream(spec);
  for (int64_t j = 0; j < spec.length; ++j) {
    const EnvironmentSite site = stream.next();
    CHECK(site.lambda == env.lambda(j));
    CHECK(site.chi == env.chi(j));
  }
}

TEST_CASE("undoped sites carry the zeta draw bit-exactly (decomposition)") {
  EnvironmentSpec spec;
  spec.delta = 0.6;
  spec.dope = DopeProfile::PowerLaw(0.3);
  spec.zeta = GaussianZeta{2.0};
  spec.length = 1000;
  spec.seed = 777;
  EnvironmentStream stream(spec);
  const double rho = spec.rho();
  for (int64_t j = 0; j < spec.length; ++j) {
    const EnvironmentSite site = stream.next();
    if (site.chi) {
      CHECK(site.lambda == rho);
    } else {
      CHECK(site.lambda == site.zeta);
    }
  }
}

TEST_CASE("rademacher zeta is exactly +/-1 and roughly balanced") {
  CounterStream s = derive_stream(404u, StreamDomain::kEnvSite, 0);
  const ZetaRegime regime = RademacherZeta{};
  int plus = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double z = sample_zeta(regime, s);
    CHECK((z == 1.0 || z == -1.0));
    if (z > 0) ++plus;
  }
  CHECK(std::abs(plus - n / 2) < 500);  // ~7 sigma
}

TEST_CASE("heavy symmetric zeta has the advertised tail function") {
  // P[|zeta| > r] = 2c r^{-alpha}; with c = 1/2 this is r^{-alpha} exactly.
  const double alpha = 1.5;
  const ZetaRegime regime = HeavySymmetricZeta{alpha, 0.5};
  CounterStream s = derive_stream(606u, StreamDomain::kEnvSite, 3);
  const int n = 400000;
  std::vector<double> absZ(n);
  int positive = 0;
  for (int i = 0; i < n; ++i) {
    const double z = sample_zeta(regime, s);
    absZ[static_cast<size_t>(i)] = std::abs(z);
    if (z > 0) ++positive;
  }
  // Symmetry of the sign.
  CHECK(std::abs(positive - n / 2) < 0.01 * n);
  // Tail calibration at several radii.
  for (const double r : {2.0, 5.0, 10.0}) {
    const double expected = std::pow(r, -alpha);
    const auto count = static_cast<double>(
        std::count_if(absZ.begin(), absZ.end(),
                      [r](double v) { return v > r; }));
    const double ratio = count / n / expected;
    CHECK(ratio > 0.85);
    CHECK(ratio < 1.15);
  }
  // The smallest possible |zeta| is (2c)^{1/alpha} = 1 when c = 1/2.
  CHECK(*std::min_element(absZ.begin(), absZ.end()) >= 1.0);
}

TEST_CASE("heavy asymmetric zeta has dominant negative tail") {
  const ZetaRegime regime = HeavyAsymmetricZeta{1.5, 0.5};
  CounterStream s = derive_stream(808u, StreamDomain::kEnvSite, 4);
  const int n = 200000;
  int positive = 0;
  double negTail = 0, posTail = 0;  // counts of |z| > 100 by sign
  for (int i = 0; i < n; ++i) {
    const double z = sample_zeta(regime, s);
    if (z > 0) {
      ++positive;
      if (z > 100.0) ++posTail;
    } else if (z < -100.0) {
      ++negTail;
    }
  }
  CHECK(std::abs(positive - n / 2) < 0.01 * n);  // fair sign coin
  // P[z < -r] = (1/2) r^{-0.5} = 0.05 at r=100; P[z > r] = (1/2) r^{-1.5}.
  CHECK(negTail / n == doctest::Approx(0.05).epsilon(0.08));
  CHECK(posTail / n == doctest::Approx(0.0005).epsilon(0.5));
  CHECK(negTail > 10.0 * posTail);
}

TEST_CASE("regime validation rejects out-of-range parameters") {
  CHECK_THROWS_AS(validate_regime(GaussianZeta{0.0}), std::invalid_argument);
  CHECK_THROWS_AS(validate_regime(GaussianZeta{-1.0}), std::invalid_argument);
  CHECK_THROWS_AS(validate_regime(HeavySymmetricZeta{0.0, 0.5}),
                  std::invalid_argument);
  CHECK_THROWS_AS(validate_regime(HeavySymmetricZeta{2.0, 0.5}),
                  std::invalid_argument);
  CHECK_THROWS_AS(validate_regime(HeavySymmetricZeta{1.5, 0.0}),
                  std::invalid_argument);
  // The negative tail must be the heavy, infinite-mean one.
  CHECK_THROWS_AS(validate_regime(HeavyAsymmetricZeta{1.5, 1.2}),
                  std::invalid_argument);
  CHECK_THROWS_AS(validate_regime(HeavyAsymmetricZeta{0.5, 0.8}),
                  std::invalid_argument);
  CHECK_NOTHROW(validate_regime(HeavyAsymmetricZeta{1.5, 0.5}));
  CHECK_NOTHROW(validate_regime(HeavyAsymmetricZeta{0.8, 0.4}));

  EnvironmentSpec spec;
  spec.delta = 1.0;  // must be strictly inside (-1, 1)
  spec.dope = DopeProfile::Zero();
  spec.zeta = RademacherZeta{};
  spec.length = 10;
  spec.seed = 1;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec.delta = 0.0;
  spec.length = 0;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}

TEST_CASE("dope_counts tallies doped and undoped sites") {
  EnvironmentSpec spec;
  spec.delta = 0.1;
  spec.dope = DopeProfile::Constant(0.5);
  spec.zeta = RademacherZeta{};
  spec.length = 3;
  spec.seed = 3;
  const Environment env(spec, {0.5, -1.0, 0.5}, {1, 0, 1});
  const auto [undoped, doped] = dope_counts(env, 2);
  CHECK(undoped == 1);
  CHECK(doped == 2);
  CHECK_THROWS_AS(dope_counts(env, 3), std::out_of_range);
  CHECK_THROWS_AS(dope_counts(env, -1), std::out_of_range);
}

TEST_CASE("doped-site frequency follows the power-law profile density") {
  EnvironmentSpec spec;
  spec.delta = 0.4;
  spec.dope = DopeProfile::PowerLaw(0.25);
  spec.zeta = RademacherZeta{};
  spec.length = 1000000;
  spec.seed = 13579;
  const Environment env = sample_environment(spec);
  const auto [undoped, doped] = dope_counts(env, spec.length - 1);
  CHECK(undoped + doped == spec.length);
  // Doped count up to N grows like N^{1-beta}/(1-beta) = (4/3) N^{3/4}.
  const double predicted =
      std::pow(static_cast<double>(spec.length), 0.75) / 0.75;
  const double ratio = static_cast<double>(doped) / predicted;
  CHECK(ratio > 0.9);
  CHECK(ratio < 1.1);
}

TEST_CASE("partial sums accumulate lambda left to right") {
  EnvironmentSpec spec;
  spec.delta = -0.5;
  spec.dope = DopeProfile::One();
  spec.zeta = RademacherZeta{};
  spec.length = 4;
  spec.seed = 2;
  const Environment env = sample_environment(spec);
  const std::vector<double> S = partial_sums(env);
  REQUIRE(S.size() == 4);
  const double rho = spec.rho();  // log 3
  for (int64_t i = 0; i < 4; ++i) {
    CHECK(S[static_cast<size_t>(i)] ==
          doctest::Approx(static_cast<double>(i + 1) * rho).epsilon(1e-14));
  }
}

TEST_CASE("different seeds give different environments") {
  EnvironmentSpec a;
  a.delta = 0.0;
  a.dope = DopeProfile::Zero();
  a.zeta = GaussianZeta{1.0};
  a.length = 64;
  a.seed = 1;
  EnvironmentSpec b = a;
  b.seed = 2;
  const Environment ea = sample_environment(a);
  const Environment eb = sample_environment(b);
  int same = 0;
  for (int64_t j = 0; j < 64; ++j) {
    if (ea.lambda(j) == eb.lambda(j)) ++same;
  }
  CHECK(same == 0);
}
