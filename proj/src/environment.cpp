#include "rwre/environment.hpp"

#include <algorithm>
#include <cmath>

namespace rwre {

double DopeProfile::at(int64_t n) const {
  if (n < 0) throw std::invalid_argument("phi_at: n must be non-negative");
  switch (kind_) {
    case DopeKind::kZero:
      return 0.0;
    case DopeKind::kOne:
      return 1.0;
    case DopeKind::kPowerLaw:
      return n == 0 ? 1.0 : std::pow(static_cast<double>(n), -beta_);
    case DopeKind::kOneMinusPowerLaw:
      return n == 0 ? 0.0 : 1.0 - std::pow(static_cast<double>(n), -beta_);
    case DopeKind::kConstant:
      return constant_;
  }
  throw std::logic_error("phi_at: unknown dope kind");
}

void validate_regime(const ZetaRegime& regime) {
  if (const auto* g = std::get_if<GaussianZeta>(&regime)) {
    if (!(g->sigma > 0.0) || !std::isfinite(g->sigma)) {
      throw std::invalid_argument("GaussianZeta: sigma must be positive");
    }
  } else if (const auto* h = std::get_if<HeavySymmetricZeta>(&regime)) {
    if (!(h->alpha > 0.0 && h->alpha < 2.0)) {
      throw std::invalid_argument("HeavySymmetricZeta: alpha must be in (0,2)");
    }
    if (!(h->c > 0.0) || !std::isfinite(h->c)) {
      throw std::invalid_argument("HeavySymmetricZeta: c must be positive");
    }
  } else if (const auto* a = std::get_if<HeavyAsymmetricZeta>(&regime)) {
    // The negative tail must dominate with infinite mean: that is what sends
    // the log-odds sums to -infinity and makes the chain transient.
    if (!(a->alpha_neg > 0.0 && a->alpha_neg < 1.0 &&
          a->alpha_neg < a->alpha_pos)) {
      throw std::invalid_argument(
          "HeavyAsymmetricZeta: require 0 < alpha_neg < min(1, alpha_pos)");
    }
    if (!std::isfinite(a->alpha_pos)) {
      throw std::invalid_argument("HeavyAsymmetricZeta: alpha_pos not finite");
    }
  }
}

bool is_finite_variance(const ZetaRegime& regime) {
  return std::holds_alternative<RademacherZeta>(regime) ||
         std::holds_alternative<GaussianZeta>(regime);
}

bool is_symmetric(const ZetaRegime& regime) {
  return !std::holds_alternative<HeavyAsymmetricZeta>(regime);
}

std::string regime_name(const ZetaRegime& regime) {
  if (std::holds_alternative<RademacherZeta>(regime)) return "rademacher";
  if (std::holds_alternative<GaussianZeta>(regime)) return "gaussian";
  if (std::holds_alternative<HeavySymmetricZeta>(regime)) {
    return "heavy_symmetric";
  }
  return "heavy_asymmetric";
}

double sample_zeta(const ZetaRegime& regime, CounterStream& stream) {
  struct Visitor {
    CounterStream& s;
    double operator()(const RademacherZeta&) const {
      return s.next_coin() ? 1.0 : -1.0;
    }
    double operator()(const GaussianZeta& g) const {
      return g.sigma * s.next_gaussian();
    }
    double operator()(const HeavySymmetricZeta& h) const {
      const bool positive = s.next_coin();
      const double mag = std::pow(2.0 * h.c, 1.0 / h.alpha) *
                         std::pow(s.next_unit_open(), -1.0 / h.alpha);
      return positive ? mag : -mag;
    }
    double operator()(const HeavyAsymmetricZeta& a) const {
      const bool positive = s.next_coin();
      if (positive) {
        return std::pow(s.next_unit_open(), -1.0 / a.alpha_pos);
      }
      return -std::pow(s.next_unit_open(), -1.0 / a.alpha_neg);
    }
  };
  return std::visit(Visitor{stream}, regime);
}

double EnvironmentSpec::rho() const {
  return std::log((1.0 - delta) / (1.0 + delta));
}

void EnvironmentSpec::validate() const {
  if (!(delta > -1.0 && delta < 1.0)) {
    throw std::invalid_argument("EnvironmentSpec: delta must be in (-1,1)");
  }
  if (length <= 0) {
    throw std::invalid_argument("EnvironmentSpec: length must be positive");
  }
  validate_regime(zeta);
}

Environment::Environment(EnvironmentSpec spec, std::vector<double> lambda,
                         std::vector<uint8_t> chi)
    : spec_(std::move(spec)), lambda_(std::move(lambda)), chi_(std::move(chi)) {
  if (lambda_.size() != chi_.size()) {
    throw std::invalid_argument("Environment: lambda/chi size mismatch");
  }
}

EnvironmentStream::EnvironmentStream(EnvironmentSpec spec)
    : spec_(std::move(spec)) {
  spec_.validate();
  rho_ = spec_.rho();
}

EnvironmentSite EnvironmentStream::next() {
  const int64_t j = next_++;
  // One substream per site: environments of different lengths with the same
  // seed agree on their common prefix, and sites can be regenerated at random
  // access for the decomposition checks.
  CounterStream s = derive_stream(spec_.seed, StreamDomain::kEnvSite,
                                  static_cast<uint64_t>(j));
  const double u_chi = s.next_unit_open();
  EnvironmentSite site;
  site.chi = u_chi < spec_.dope.at(j);
  // zeta is drawn whether or not the site is doped, so the coupled i.i.d.
  // sequence (zeta_j) is reproducible alongside the environment.
  site.zeta = sample_zeta(spec_.zeta, s);
  site.lambda = site.chi ? rho_ : site.zeta;
  return site;
}

Environment sample_environment(const EnvironmentSpec& spec) {
  EnvironmentStream stream(spec);
  std::vector<double> lambda;
  std::vector<uint8_t> chi;
  lambda.reserve(static_cast<size_t>(spec.length));
  chi.reserve(static_cast<size_t>(spec.length));
  for (int64_t j = 0; j < spec.length; ++j) {
    const EnvironmentSite site = stream.next();
    lambda.push_back(site.lambda);
    chi.push_back(site.chi ? 1 : 0);
  }
  return Environment(spec, std::move(lambda), std::move(chi));
}

std::vector<double> partial_sums(const Environment& env) {
  std::vector<double> s(static_cast<size_t>(env.size()));
  double acc = 0.0;
  for (int64_t i = 0; i < env.size(); ++i) {
    acc += env.lambda(i);
    s[static_cast<size_t>(i)] = acc;
  }
  return s;
}

std::pair<int64_t, int64_t> dope_counts(const Environment& env, int64_t n) {
  if (n < 0 || n >= env.size()) {
    throw std::out_of_range("dope_counts: index out of range");
  }
  int64_t doped = 0;
  for (int64_t j = 0; j <= n; ++j) doped += env.chi(j) ? 1 : 0;
  return {n + 1 - doped, doped};
}

}  // namespace rwre
