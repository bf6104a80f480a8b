#include "rwre/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <variant>
#include <vector>

namespace rwre {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

// Require a field to be present before reading it, so diagnostics name the
// missing key instead of surfacing a generic type error.
const json& field(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) {
    throw std::invalid_argument(std::string("config: missing field \"") +
                                key + "\"");
  }
  return *it;
}

std::string hash_hex(uint64_t h) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "0x%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

// Stable logistic, matching Environment::p_left branch for branch so the
// streamed CSV agrees bitwise with the materialized environment.
double stable_expit(double l) {
  if (l >= 0.0) return 1.0 / (1.0 + std::exp(-l));
  const double e = std::exp(l);
  return e / (1.0 + e);
}

double median_sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v.empty() ? 0.0 : v[v.size() / 2];
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

uint64_t fnv1a64(std::string_view bytes) {
  uint64_t h = 14695981039346656037ull;
  for (const char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

uint64_t config_hash(const ordered_json& config) {
  return fnv1a64(config.dump());
}

// ---------------------------------------------------------------------------
// Spec serialization.

ordered_json dope_to_json(const DopeProfile& dope) {
  ordered_json j;
  switch (dope.kind()) {
    case DopeKind::kZero:
      j["kind"] = "zero";
      break;
    case DopeKind::kOne:
      j["kind"] = "one";
      break;
    case DopeKind::kPowerLaw:
      j["kind"] = "power_law";
      j["beta"] = dope.beta();
      break;
    case DopeKind::kOneMinusPowerLaw:
      j["kind"] = "one_minus_power_law";
      j["beta"] = dope.beta();
      break;
    case DopeKind::kConstant:
      j["kind"] = "constant";
      j["phi"] = dope.constant();
      break;
  }
  return j;
}

DopeProfile dope_from_json(const json& j) {
  const std::string kind = field(j, "kind").get<std::string>();
  if (kind == "zero") return DopeProfile::Zero();
  if (kind == "one") return DopeProfile::One();
  if (kind == "power_law") {
    return DopeProfile::PowerLaw(field(j, "beta").get<double>());
  }
  if (kind == "one_minus_power_law") {
    return DopeProfile::OneMinusPowerLaw(field(j, "beta").get<double>());
  }
  if (kind == "constant") {
    return DopeProfile::Constant(field(j, "phi").get<double>());
  }
  throw std::invalid_argument("config: unknown dope kind \"" + kind + "\"");
}

ordered_json zeta_to_json(const ZetaRegime& zeta) {
  ordered_json j;
  std::visit(
      [&](const auto& law) {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, RademacherZeta>) {
          j["kind"] = "rademacher";
        } else if constexpr (std::is_same_v<T, GaussianZeta>) {
          j["kind"] = "gaussian";
          j["sigma"] = law.sigma;
        } else if constexpr (std::is_same_v<T, HeavySymmetricZeta>) {
          j["kind"] = "heavy_symmetric";
          j["alpha"] = law.alpha;
          j["c"] = law.c;
        } else {
          j["kind"] = "heavy_asymmetric";
          j["alpha_pos"] = law.alpha_pos;
          j["alpha_neg"] = law.alpha_neg;
        }
      },
      zeta);
  return j;
}

ZetaRegime zeta_from_json(const json& j) {
  const std::string kind = field(j, "kind").get<std::string>();
  if (kind == "rademacher") return RademacherZeta{};
  if (kind == "gaussian") {
    return GaussianZeta{field(j, "sigma").get<double>()};
  }
  if (kind == "heavy_symmetric") {
    return HeavySymmetricZeta{field(j, "alpha").get<double>(),
                              field(j, "c").get<double>()};
  }
  if (kind == "heavy_asymmetric") {
    return HeavyAsymmetricZeta{field(j, "alpha_pos").get<double>(),
                               field(j, "alpha_neg").get<double>()};
  }
  throw std::invalid_argument("config: unknown zeta kind \"" + kind + "\"");
}

ordered_json spec_to_json(const EnvironmentSpec& spec) {
  ordered_json j;
  j["delta"] = spec.delta;
  j["dope"] = dope_to_json(spec.dope);
  j["zeta"] = zeta_to_json(spec.zeta);
  j["length"] = spec.length;
  j["seed"] = spec.seed;
  return j;
}

EnvironmentSpec spec_from_json(const json& j) {
  EnvironmentSpec spec;
  spec.delta = field(j, "delta").get<double>();
  spec.dope = dope_from_json(field(j, "dope"));
  spec.zeta = zeta_from_json(field(j, "zeta"));
  spec.length = field(j, "length").get<int64_t>();
  spec.seed = field(j, "seed").get<uint64_t>();
  spec.validate();
  return spec;
}

EnvironmentSpec load_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open spec file: " + path);
  }
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("bad JSON in " + path + ": " + e.what());
  }
  return spec_from_json(j);
}

// ---------------------------------------------------------------------------
// Run headers.

void write_csv_run_header(std::ostream& out, std::string_view command,
                          const ordered_json& config, uint64_t seed) {
  out << "# artifact_version=" << kArtifactVersion << "\n";
  out << "# command=" << command << "\n";
  out << "# config_hash=" << hash_hex(config_hash(config)) << "\n";
  out << "# seed=" << seed << "\n";
  out << "# config=" << config.dump() << "\n";
}

ordered_json run_meta(std::string_view command, const ordered_json& config,
                      uint64_t seed) {
  ordered_json meta;
  meta["artifact_version"] = kArtifactVersion;
  meta["command"] = command;
  meta["config_hash"] = hash_hex(config_hash(config));
  meta["seed"] = seed;
  meta["config"] = config;
  return meta;
}

// ---------------------------------------------------------------------------
// Artifact writers.

void write_environment_csv(std::ostream& out, const ordered_json& config,
                           const EnvironmentSpec& spec) {
  write_csv_run_header(out, "gen-env", config, spec.seed);
  out << "j,chi,zeta,lambda,p_left\n";
  EnvironmentStream sites(spec);
  for (int64_t j = 0; j < spec.length; ++j) {
    const EnvironmentSite site = sites.next();
    out << j << ',' << (site.chi ? 1 : 0) << ',' << format_double(site.zeta)
        << ',' << format_double(site.lambda) << ','
        << format_double(stable_expit(site.lambda)) << '\n';
  }
}

void write_functionals_csv(std::ostream& out, const ordered_json& config,
                           const EnvironmentSpec& spec, const Environment& env,
                           const QuenchedFunctionals& fn) {
  write_csv_run_header(out, "functionals", config, spec.seed);
  out << "level,lambda,S,max_prefix,log_delta,log_f,log_t\n";
  const int64_t n = fn.sites();
  for (int64_t i = 0; i <= n; ++i) {
    out << i << ',';
    if (i == 0) {
      // Level 0 precedes every site; the site columns are empty.
      out << ",,,";
    } else {
      const size_t s = static_cast<size_t>(i - 1);
      out << format_double(env.lambda(i - 1)) << ','
          << format_double(fn.S[s]) << ',' << format_double(fn.maxPrefix[s])
          << ',' << format_double(fn.logDelta[s]);
    }
    const size_t l = static_cast<size_t>(i);
    out << ',' << format_double(fn.logF[l]) << ','
        << format_double(fn.logT[l]) << '\n';
  }
}

ordered_json verdict_to_json(const PhaseVerdict& verdict) {
  ordered_json j;
  j["empirical"] = to_string(verdict.empirical);
  j["predicted"] = to_string(verdict.predicted);
  j["evidence"]["log_f_growth"] = verdict.evidence.logFGrowth;
  j["evidence"]["max_prefix_growth"] = verdict.evidence.maxPrefixGrowth;
  j["evidence"]["inv_d_tail_sum"] = verdict.evidence.invDTailSum;
  j["truncation"] = verdict.truncation;
  return j;
}

void write_trajectories_csv(std::ostream& out, const ordered_json& config,
                            uint64_t seed,
                            const std::vector<TrajectoryStats>& runs) {
  write_csv_run_header(out, "simulate", config, seed);
  out << "replica,record,t,value\n";
  for (size_t r = 0; r < runs.size(); ++r) {
    const TrajectoryStats& run = runs[r];
    for (size_t k = 0; k < run.checkpoints.size(); ++k) {
      out << r << ",running_max," << run.checkpoints[k] << ','
          << run.runningMax[k] << '\n';
    }
    for (size_t k = 0; k < run.firstHitTime.size(); ++k) {
      out << r << ",first_hit," << run.firstHitTime[k] << ',' << (k + 1)
          << '\n';
    }
  }
}

ordered_json fits_to_json(const std::vector<EnvelopeFit>& fits,
                          const EnvironmentSpec& spec) {
  ordered_json j;
  j["replicas"] = fits.size();
  ordered_json rows = ordered_json::array();
  std::vector<double> thetas, prefactors;
  for (size_t r = 0; r < fits.size(); ++r) {
    const EnvelopeFit& fit = fits[r];
    ordered_json row;
    row["replica"] = r;
    row["theta"] = fit.theta;
    row["prefactor"] = fit.prefactor;
    row["r_squared"] = fit.rSquared;
    row["window_begin"] = fit.windowBegin;
    row["window_end"] = fit.windowEnd;
    row["degenerate"] = fit.degenerate;
    rows.push_back(std::move(row));
    thetas.push_back(fit.theta);
    prefactors.push_back(fit.prefactor);
  }
  j["fits"] = std::move(rows);
  j["median_theta"] = median_sorted(thetas);
  j["median_prefactor"] = median_sorted(prefactors);
  try {
    j["prefactor_target"] = limsup_prefactor_target(spec);
  } catch (const std::invalid_argument&) {
    j["prefactor_target"] = nullptr;  // spec outside the closed-form family
  }
  return j;
}

}  // namespace rwre
