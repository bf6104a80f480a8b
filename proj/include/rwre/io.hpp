#pragma once

// Serialization and reproducibility plumbing.
//
// Every output artifact embeds (artifact version, config hash, root seed)
// plus the full resolved configuration, so any file is reproducible from its
// own header.  Doubles are printed with %.17g (lossless round-trip); no
// output contains timestamps, hostnames, or thread counts, so identical
// configurations produce byte-identical files regardless of scheduling.
//
// JSON field names mirror the C++ struct field names exactly.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include "json.hpp"
#include "rwre/classifier.hpp"
#include "rwre/environment.hpp"
#include "rwre/functionals.hpp"
#include "rwre/simulator.hpp"

namespace rwre {

inline constexpr std::string_view kArtifactVersion = "1.0.0";

// Lossless decimal rendering of a double (%.17g); "inf"/"-inf"/"nan" for
// non-finite values.
std::string format_double(double x);

// FNV-1a 64-bit hash of a byte string.
uint64_t fnv1a64(std::string_view bytes);

// Canonical config hash: FNV-1a over the compact dump of a config object.
uint64_t config_hash(const nlohmann::ordered_json& config);

// ---------------------------------------------------------------------------
// EnvironmentSpec <-> JSON.  Schema (field names match the struct):
//   {"delta": d, "dope": {"kind": k, ...}, "zeta": {"kind": k, ...},
//    "length": n, "seed": s}
// Dope kinds: "zero" | "one" | "power_law"{beta} | "one_minus_power_law"
// {beta} | "constant"{phi}.  Zeta kinds: "rademacher" | "gaussian"{sigma} |
// "heavy_symmetric"{alpha, c} | "heavy_asymmetric"{alpha_pos, alpha_neg}.

nlohmann::ordered_json dope_to_json(const DopeProfile& dope);
DopeProfile dope_from_json(const nlohmann::json& j);

nlohmann::ordered_json zeta_to_json(const ZetaRegime& zeta);
ZetaRegime zeta_from_json(const nlohmann::json& j);

nlohmann::ordered_json spec_to_json(const EnvironmentSpec& spec);
EnvironmentSpec spec_from_json(const nlohmann::json& j);

// Parse a spec from a JSON file.  Throws std::invalid_argument with the
// offending path/field on any problem (missing file, bad JSON, bad field).
EnvironmentSpec load_spec_file(const std::string& path);

// ---------------------------------------------------------------------------
// Embedded run headers.

// CSV header block: "# key=value" comment lines carrying the artifact
// version, command, config hash, root seed, and the full config JSON.
void write_csv_run_header(std::ostream& out, std::string_view command,
                          const nlohmann::ordered_json& config, uint64_t seed);

// The same metadata as a JSON object {artifact_version, command,
// config_hash, seed, config}.
nlohmann::ordered_json run_meta(std::string_view command,
                                const nlohmann::ordered_json& config,
                                uint64_t seed);

// ---------------------------------------------------------------------------
// Artifact writers.

// Environment realization, one row per site: j, chi, zeta, lambda, p_left.
// Streams sites in O(1) memory; `config` is embedded in the header.
void write_environment_csv(std::ostream& out,
                           const nlohmann::ordered_json& config,
                           const EnvironmentSpec& spec);

// Quenched functionals, one row per level i = 0..n: the statistics of site
// i-1 (lambda, S, log Delta) and the level values log f(i), log T(i).
void write_functionals_csv(std::ostream& out,
                           const nlohmann::ordered_json& config,
                           const EnvironmentSpec& spec,
                           const Environment& env,
                           const QuenchedFunctionals& fn);

// Phase verdict as JSON (empirical, predicted, evidence, truncation).
nlohmann::ordered_json verdict_to_json(const PhaseVerdict& verdict);

// Trajectory statistics in long form: one row per (replica, record) with
// record "running_max" (t = checkpoint, value = M(t)) or "first_hit"
// (t = hitting time, value = level).
void write_trajectories_csv(std::ostream& out,
                            const nlohmann::ordered_json& config,
                            uint64_t seed,
                            const std::vector<TrajectoryStats>& runs);

// Envelope fits as JSON: per-replica {theta, prefactor, r_squared, window,
// degenerate} plus medians and, when the spec family pins one, the
// closed-form prefactor target.
nlohmann::ordered_json fits_to_json(const std::vector<EnvelopeFit>& fits,
                                    const EnvironmentSpec& spec);

}  // namespace rwre
