#pragma once

// Random-environment model on the non-negative integers.
//
// A site j carries the log-odds lambda_j = log(p_j / q_j), where p_j is the
// probability the walk steps TOWARD the origin from j (and the origin holds
// with probability p_0). Sites are "doped" independently with probability
// phi(j): a doped site carries the fixed systematic log-odds
// rho = log((1-delta)/(1+delta)); an undoped site carries a fresh i.i.d. draw
// zeta_j. Positive lambda pushes the walk toward 0.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "rwre/rng.hpp"

namespace rwre {

// ---------------------------------------------------------------------------
// Dope profile phi(n): probability that site n carries the systematic drift.

enum class DopeKind : uint8_t {
  kZero = 0,
  kOne = 1,
  kPowerLaw = 2,            // phi(n) = n^-beta, with phi(0) := 1
  kOneMinusPowerLaw = 3,    // phi(n) = 1 - n^-beta, with phi(0) := 0
  kConstant = 4,
};

class DopeProfile {
 public:
  static DopeProfile Zero() { return DopeProfile(DopeKind::kZero, 0.0, 0.0); }
  static DopeProfile One() { return DopeProfile(DopeKind::kOne, 0.0, 1.0); }
  static DopeProfile PowerLaw(double beta) {
    require_beta(beta);
    return DopeProfile(DopeKind::kPowerLaw, beta, 0.0);
  }
  static DopeProfile OneMinusPowerLaw(double beta) {
    require_beta(beta);
    return DopeProfile(DopeKind::kOneMinusPowerLaw, beta, 0.0);
  }
  static DopeProfile Constant(double phi) {
    if (!(phi >= 0.0 && phi <= 1.0)) {
      throw std::invalid_argument("DopeProfile: constant phi must be in [0,1]");
    }
    return DopeProfile(DopeKind::kConstant, 0.0, phi);
  }

  // phi(n); the n = 0 value of the power-law variants follows the convention
  // of the dominant component (1 for PowerLaw, 0 for OneMinusPowerLaw).
  double at(int64_t n) const;

  DopeKind kind() const { return kind_; }
  double beta() const { return beta_; }
  double constant() const { return constant_; }

  bool operator==(const DopeProfile&) const = default;

 private:
  DopeProfile(DopeKind kind, double beta, double constant)
      : kind_(kind), beta_(beta), constant_(constant) {}
  static void require_beta(double beta) {
    if (!(beta > 0.0 && beta < 1.0)) {
      throw std::invalid_argument("DopeProfile: beta must be in (0,1)");
    }
  }

  DopeKind kind_;
  double beta_;      // power-law exponent (power-law kinds only)
  double constant_;  // phi value (Constant; One stores 1)
};

// Free-function spelling of the profile evaluation.
inline double phi_at(const DopeProfile& profile, int64_t n) {
  return profile.at(n);
}

// ---------------------------------------------------------------------------
// Law of the undoped log-odds zeta.

struct RademacherZeta {
  // +1 or -1 with equal probability; variance 1.
  bool operator==(const RademacherZeta&) const = default;
};

struct GaussianZeta {
  double sigma = 1.0;  // standard deviation, > 0
  bool operator==(const GaussianZeta&) const = default;
};

// Symmetric exact two-sided Pareto: zeta = sign * (2c)^{1/alpha} U^{-1/alpha}
// with a fair independent sign and U uniform on (0,1), so that
// P[zeta > r] = c r^{-alpha} exactly for r >= (2c)^{1/alpha}.
struct HeavySymmetricZeta {
  double alpha = 1.5;  // tail index, in (0,2)
  double c = 0.5;      // tail constant per side, > 0
  bool operator==(const HeavySymmetricZeta&) const = default;
};

// Asymmetric Pareto tails: zeta = B * U^{-1/alpha_pos} for a fair coin B = 1,
// else -U'^{-1/alpha_neg}; tails P[zeta > x] ~ x^{-alpha_pos}/2 and
// P[zeta < -x] ~ x^{-alpha_neg}/2. The constructor-level invariant
// 0 < alpha_neg < min(1, alpha_pos) makes the negative tail strictly
// dominant with infinite mean, so the log-odds sums drift to -infinity and
// the chain escapes to +infinity (the transient asymmetric family).
struct HeavyAsymmetricZeta {
  double alpha_pos = 1.5;  // positive-tail index
  double alpha_neg = 0.5;  // negative-tail index, in (0, min(1, alpha_pos))
  bool operator==(const HeavyAsymmetricZeta&) const = default;
};

using ZetaRegime = std::variant<RademacherZeta, GaussianZeta,
                                HeavySymmetricZeta, HeavyAsymmetricZeta>;

void validate_regime(const ZetaRegime& regime);  // throws invalid_argument
bool is_finite_variance(const ZetaRegime& regime);
bool is_symmetric(const ZetaRegime& regime);
std::string regime_name(const ZetaRegime& regime);

// One draw of zeta. Consumes a regime-dependent number of values from the
// stream; callers that need site-level determinism use one stream per site.
double sample_zeta(const ZetaRegime& regime, CounterStream& stream);

// ---------------------------------------------------------------------------
// Environment specification and realization.

struct EnvironmentSpec {
  double delta = 0.0;  // systematic drift parameter, in (-1,1)
  DopeProfile dope = DopeProfile::Zero();
  ZetaRegime zeta = RademacherZeta{};
  int64_t length = 0;  // number of sites N
  uint64_t seed = 0;

  // rho = log((1-delta)/(1+delta)); opposite sign to delta, zero iff delta=0.
  double rho() const;

  void validate() const;  // throws invalid_argument on any bad field
  bool operator==(const EnvironmentSpec&) const = default;
};

class Environment {
 public:
  Environment(EnvironmentSpec spec, std::vector<double> lambda,
              std::vector<uint8_t> chi);

  const EnvironmentSpec& spec() const { return spec_; }
  int64_t size() const { return static_cast<int64_t>(lambda_.size()); }

  double lambda(int64_t j) const { return lambda_[static_cast<size_t>(j)]; }
  bool chi(int64_t j) const { return chi_[static_cast<size_t>(j)] != 0; }

  // Probability of stepping toward the origin from site j (holding, at j=0).
  double p_left(int64_t j) const {
    const double l = lambda_[static_cast<size_t>(j)];
    // logistic(l) = e^l / (1 + e^l), evaluated in the stable branch.
    return l >= 0.0 ? 1.0 / (1.0 + std::exp(-l)) : Environment::expit_neg(l);
  }

  const std::vector<double>& lambda_array() const { return lambda_; }
  const std::vector<uint8_t>& chi_array() const { return chi_; }

 private:
  static double expit_neg(double l) {
    const double e = std::exp(l);
    return e / (1.0 + e);
  }

  EnvironmentSpec spec_;
  std::vector<double> lambda_;
  std::vector<uint8_t> chi_;
};

// One realized site, with the coupled i.i.d. zeta draw exposed regardless of
// whether the site ended up doped (the partial-sum decomposition checks
// compare against the full zeta sequence).
struct EnvironmentSite {
  double lambda = 0.0;
  double zeta = 0.0;
  bool chi = false;
};

// O(1)-memory site generator; site j is a pure function of (spec.seed, j).
class EnvironmentStream {
 public:
  explicit EnvironmentStream(EnvironmentSpec spec);

  EnvironmentSite next();                   // site index(), then advances
  int64_t index() const { return next_; }   // next site to be produced
  const EnvironmentSpec& spec() const { return spec_; }

 private:
  EnvironmentSpec spec_;
  double rho_ = 0.0;
  int64_t next_ = 0;
};

// Materialize all spec.length sites. Deterministic: identical specs (seed
// included) give bit-identical environments.
Environment sample_environment(const EnvironmentSpec& spec);

// Prefix sums S_i = sum_{j<=i} lambda_j, i = 0..N-1, accumulated left to
// right (the S_{-1} = 0 convention is the caller's).
std::vector<double> partial_sums(const Environment& env);

// (N_0(n), N_1(n)) = counts of undoped / doped sites among j <= n.
std::pair<int64_t, int64_t> dope_counts(const Environment& env, int64_t n);

}  // namespace rwre
