// rwre: command-line laboratory for nearest-neighbour random walks in
// non-homogeneous random environments on the half line.
//
// Subcommands: gen-env, functionals, classify, sweep, simulate, fit,
// validate.  Every output embeds (artifact version, config hash, root seed)
// and the full resolved configuration, so any file is reproducible from its
// own header.  All randomness flows from one root seed; results are byte-
// identical for every --threads value.
//
// Exit codes: 0 success, 1 validation failure (an asserted check failed or
// a run hit a documented runtime refusal), 2 usage error (bad flags, bad
// config, unreadable files).

#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rwre/classifier.hpp"
#include "rwre/environment.hpp"
#include "rwre/functionals.hpp"
#include "rwre/io.hpp"
#include "rwre/rng.hpp"
#include "rwre/simulator.hpp"
#include "rwre/sweep.hpp"
#include "rwre/thread_pool.hpp"
#include "rwre/validate.hpp"

namespace {

using nlohmann::ordered_json;
using namespace rwre;

// A count flag: plain or scientific decimal ("50", "1e8"), integral, >= 1.
int64_t parse_count(const char* flag, const std::string& text) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0' || errno == ERANGE ||
      !std::isfinite(v)) {
    throw std::invalid_argument(std::string(flag) + ": not a number: \"" +
                                text + "\"");
  }
  if (v < 1.0 || v > 9.0e18) {
    throw std::invalid_argument(std::string(flag) + ": out of range: \"" +
                                text + "\"");
  }
  const double r = std::round(v);
  if (std::abs(v - r) > 1e-9 * std::max(1.0, std::abs(v))) {
    throw std::invalid_argument(std::string(flag) +
                                ": not an integer count: \"" + text + "\"");
  }
  return static_cast<int64_t>(r);
}

// Output sink: --out PATH or stdout.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) {
        throw std::invalid_argument("cannot open output file: " + path);
      }
    }
  }
  std::ostream& out() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

struct Options {
  std::string specPath;
  std::string gridPath;
  std::string outPath;
  std::string format;
  std::string steps;
  std::string sites;
  std::string trials;
  std::string replicas;
  uint64_t seed = 0;
  bool seedGiven = false;
  int64_t threads = 1;
  bool dryRun = false;
  bool fit = false;
  std::string suite = "all";
};

// Spec resolved from --spec plus overrides; the returned spec is what gets
// embedded in output headers.
EnvironmentSpec resolve_spec(const Options& opt) {
  if (opt.specPath.empty()) {
    throw std::invalid_argument("--spec FILE is required for this command");
  }
  EnvironmentSpec spec = load_spec_file(opt.specPath);
  if (!opt.sites.empty()) {
    spec.length = parse_count("--sites", opt.sites);
  }
  if (opt.seedGiven) spec.seed = opt.seed;
  spec.validate();
  return spec;
}

void require_format(const Options& opt, const char* command,
                    bool csvSupported, bool jsonSupported) {
  if (opt.format.empty()) return;
  if (opt.format == "csv" && csvSupported) return;
  if (opt.format == "json" && jsonSupported) return;
  throw std::invalid_argument(std::string(command) +
                              ": unsupported --format \"" + opt.format +
                              "\"");
}

void print_json(std::ostream& out, const ordered_json& j) {
  out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------------------

int run_gen_env(const Options& opt) {
  require_format(opt, "gen-env", true, true);
  const EnvironmentSpec spec = resolve_spec(opt);
  ordered_json config;
  config["spec"] = spec_to_json(spec);

  if (opt.dryRun) {
    std::cout << "plan: command=gen-env sites=" << spec.length
              << " seed=" << spec.seed << '\n';
    return 0;
  }
  Sink sink(opt.outPath);
  if (opt.format == "json") {
    ordered_json result;
    std::vector<double> lambda, zeta;
    std::vector<int> chi;
    EnvironmentStream sites(spec);
    for (int64_t j = 0; j < spec.length; ++j) {
      const EnvironmentSite site = sites.next();
      lambda.push_back(site.lambda);
      zeta.push_back(site.zeta);
      chi.push_back(site.chi ? 1 : 0);
    }
    result["lambda"] = std::move(lambda);
    result["zeta"] = std::move(zeta);
    result["chi"] = std::move(chi);
    ordered_json doc;
    doc["meta"] = run_meta("gen-env", config, spec.seed);
    doc["result"] = std::move(result);
    print_json(sink.out(), doc);
  } else {
    write_environment_csv(sink.out(), config, spec);
  }
  return 0;
}

int run_functionals(const Options& opt) {
  require_format(opt, "functionals", true, true);
  const EnvironmentSpec spec = resolve_spec(opt);
  ordered_json config;
  config["spec"] = spec_to_json(spec);

  if (opt.dryRun) {
    std::cout << "plan: command=functionals sites=" << spec.length
              << " seed=" << spec.seed << '\n';
    return 0;
  }
  const Environment env = sample_environment(spec);
  const QuenchedFunctionals fn = compute(env, spec.length);
  Sink sink(opt.outPath);
  if (opt.format == "json") {
    const size_t n = static_cast<size_t>(fn.sites());
    ordered_json result;
    result["sites"] = fn.sites();
    result["final_S"] = fn.S[n - 1];
    result["final_max_prefix"] = fn.maxPrefix[n - 1];
    result["final_log_f"] = fn.logF[n];
    result["final_log_t"] = fn.logT[n];
    ordered_json doc;
    doc["meta"] = run_meta("functionals", config, spec.seed);
    doc["result"] = std::move(result);
    print_json(sink.out(), doc);
  } else {
    write_functionals_csv(sink.out(), config, spec, env, fn);
  }
  return 0;
}

int run_classify(const Options& opt) {
  require_format(opt, "classify", true, true);
  const EnvironmentSpec spec = resolve_spec(opt);
  ordered_json config;
  config["spec"] = spec_to_json(spec);

  if (opt.dryRun) {
    std::cout << "plan: command=classify sites=" << spec.length
              << " seed=" << spec.seed << '\n';
    return 0;
  }
  const Environment env = sample_environment(spec);
  const PhaseVerdict verdict = classify(env, compute(env, spec.length));
  Sink sink(opt.outPath);
  if (opt.format == "csv") {
    write_csv_run_header(sink.out(), "classify", config, spec.seed);
    sink.out() << "empirical,predicted,log_f_growth,max_prefix_growth,"
                  "inv_d_tail_sum,truncation\n"
               << to_string(verdict.empirical) << ','
               << to_string(verdict.predicted) << ','
               << format_double(verdict.evidence.logFGrowth) << ','
               << format_double(verdict.evidence.maxPrefixGrowth) << ','
               << format_double(verdict.evidence.invDTailSum) << ','
               << verdict.truncation << '\n';
  } else {
    ordered_json doc;
    doc["meta"] = run_meta("classify", config, spec.seed);
    doc["result"] = verdict_to_json(verdict);
    print_json(sink.out(), doc);
  }
  return 0;
}

int run_sweep(const Options& opt) {
  require_format(opt, "sweep", true, true);
  if (opt.gridPath.empty()) {
    throw std::invalid_argument("--grid FILE is required for sweep");
  }
  SweepGrid grid = load_grid_file(opt.gridPath);
  if (opt.seedGiven) grid.seed = opt.seed;
  ordered_json config;
  config["grid"] = grid_to_json(grid);

  if (opt.dryRun) {
    std::cout << "plan: command=sweep cells=" << grid.cells()
              << " envs_per_cell=" << grid.envsPerCell
              << " truncation=" << grid.truncation
              << " site_draws=" << grid.cells() * grid.envsPerCell *
                                       grid.truncation
              << " threads=" << opt.threads << '\n';
    return 0;
  }
  const std::vector<SweepCell> cells = phase_sweep(grid, opt.threads);
  Sink sink(opt.outPath);
  if (opt.format == "json") {
    ordered_json rows = ordered_json::array();
    for (const SweepCell& cell : cells) {
      ordered_json row;
      row["cell"] = cell.index;
      row["spec"] = spec_to_json(cell.spec);
      row["predicted"] = to_string(cell.predicted);
      row["n_transient"] = cell.verdictCounts[0];
      row["n_null_recurrent"] = cell.verdictCounts[1];
      row["n_positive_recurrent"] = cell.verdictCounts[2];
      row["n_indeterminate"] = cell.verdictCounts[3];
      if (cell.scored) {
        row["agreement"] = cell.agreement_rate(grid.envsPerCell);
      } else {
        row["agreement"] = nullptr;
      }
      rows.push_back(std::move(row));
    }
    ordered_json doc;
    doc["meta"] = run_meta("sweep", config, grid.seed);
    doc["result"]["cells"] = std::move(rows);
    print_json(sink.out(), doc);
  } else {
    write_sweep_csv(sink.out(), config, grid, cells);
  }
  return 0;
}

int run_simulate(const Options& opt, bool fitMode) {
  const char* command = fitMode ? "fit" : "simulate";
  require_format(opt, command, !fitMode, true);
  EnvironmentSpec spec = resolve_spec(opt);
  if (opt.steps.empty()) {
    throw std::invalid_argument("--steps T is required for this command");
  }
  const int64_t steps = parse_count("--steps", opt.steps);
  const int64_t replicas =
      opt.replicas.empty() ? 1 : parse_count("--replicas", opt.replicas);
  const bool wantFit = fitMode || opt.fit;

  ordered_json config;
  config["spec"] = spec_to_json(spec);
  config["steps"] = steps;
  config["replicas"] = replicas;
  config["checkpoint_ratio"] = kDefaultCheckpointRatio;
  config["fit"] = wantFit;

  if (opt.dryRun) {
    std::cout << "plan: command=" << command << " sites=" << spec.length
              << " steps=" << steps << " replicas=" << replicas
              << " total_steps=" << steps * replicas
              << " threads=" << opt.threads << " fit=" << (wantFit ? 1 : 0)
              << '\n';
    return 0;
  }

  // Replica r: fresh environment seed and walk stream, both derived from
  // the root seed (the same scheme the closed-form probe uses).
  std::vector<TrajectoryStats> runs(static_cast<size_t>(replicas));
  parallel_for_index(replicas, opt.threads, [&](int64_t r) {
    EnvironmentSpec envSpec = spec;
    envSpec.seed = derive_seed(spec.seed, StreamDomain::kExperiment,
                               static_cast<uint64_t>(r));
    const Environment env = sample_environment(envSpec);
    runs[static_cast<size_t>(r)] =
        run_trajectory(env, steps, kDefaultCheckpointRatio,
                       derive_stream(spec.seed, StreamDomain::kWalkReplica,
                                     static_cast<uint64_t>(r)));
  });

  Sink sink(opt.outPath);
  if (wantFit) {
    std::vector<EnvelopeFit> fits;
    fits.reserve(runs.size());
    for (const TrajectoryStats& run : runs) {
      fits.push_back(fit_envelope(run));
    }
    ordered_json doc;
    doc["meta"] = run_meta(command, config, spec.seed);
    doc["result"] = fits_to_json(fits, spec);
    print_json(sink.out(), doc);
  } else if (opt.format == "json") {
    ordered_json rows = ordered_json::array();
    for (size_t r = 0; r < runs.size(); ++r) {
      ordered_json row;
      row["replica"] = r;
      row["checkpoints"] = runs[r].checkpoints;
      row["running_max"] = runs[r].runningMax;
      row["first_hit_time"] = runs[r].firstHitTime;
      rows.push_back(std::move(row));
    }
    ordered_json doc;
    doc["meta"] = run_meta(command, config, spec.seed);
    doc["result"]["runs"] = std::move(rows);
    print_json(sink.out(), doc);
  } else {
    write_trajectories_csv(sink.out(), config, spec.seed, runs);
  }
  return 0;
}

int run_validate(const Options& opt) {
  const uint64_t seed = opt.seedGiven ? opt.seed : 7;
  const uint64_t trials =
      opt.trials.empty()
          ? 0
          : static_cast<uint64_t>(parse_count("--trials", opt.trials));

  if (opt.dryRun) {
    std::cout << "plan: command=validate suite=" << opt.suite
              << " seed=" << seed << '\n';
    return 0;
  }
  Sink sink(opt.outPath);
  const std::vector<ValidationCheck> checks =
      run_validation_suite(opt.suite, seed, trials);
  int64_t failed = 0;
  for (const ValidationCheck& check : checks) {
    sink.out() << (check.passed ? "[PASS] " : "[FAIL] ") << check.name << ": "
               << check.detail << '\n';
    failed += check.passed ? 0 : 1;
  }
  sink.out() << checks.size() - failed << '/' << checks.size()
             << " checks passed (suite=" << opt.suite << ", seed=" << seed
             << ")\n";
  return failed == 0 ? 0 : 1;
}

void add_common_flags(CLI::App* sub, Options& opt, bool withSpec) {
  if (withSpec) {
    sub->add_option("--spec", opt.specPath, "environment spec JSON file");
    sub->add_option("--sites", opt.sites,
                    "override spec length (accepts 1e6 notation)");
  }
  sub->add_option("--seed", opt.seed, "root seed (overrides config seed)")
      ->each([&opt](const std::string&) { opt.seedGiven = true; });
  sub->add_option("--out", opt.outPath, "output file (default: stdout)");
  sub->add_option("--format", opt.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  sub->add_flag("--dry-run", opt.dryRun,
                "print the resolved plan without executing");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "rwre: simulation and verification laboratory for nearest-neighbour "
      "random walks in non-homogeneous random environments on the half "
      "line"};
  app.set_version_flag("--version", std::string(kArtifactVersion));
  app.require_subcommand(1);

  Options opt;
  int rc = 0;

  CLI::App* genEnv = app.add_subcommand(
      "gen-env", "materialize one environment realization");
  add_common_flags(genEnv, opt, true);
  genEnv->callback([&] { rc = run_gen_env(opt); });

  CLI::App* functionals = app.add_subcommand(
      "functionals", "potential, harmonic scale, and hitting-time table");
  add_common_flags(functionals, opt, true);
  functionals->callback([&] { rc = run_functionals(opt); });

  CLI::App* classifyCmd = app.add_subcommand(
      "classify", "empirical and predicted phase of one environment");
  add_common_flags(classifyCmd, opt, true);
  classifyCmd->callback([&] { rc = run_classify(opt); });

  CLI::App* sweep = app.add_subcommand(
      "sweep", "phase-diagram agreement table over a parameter grid");
  sweep->add_option("--grid", opt.gridPath, "sweep grid JSON file");
  sweep->add_option("--threads", opt.threads, "worker threads")
      ->check(CLI::PositiveNumber);
  add_common_flags(sweep, opt, false);
  sweep->callback([&] { rc = run_sweep(opt); });

  CLI::App* simulate = app.add_subcommand(
      "simulate", "long-horizon walk trajectories with running maxima");
  simulate->add_option("--steps", opt.steps,
                       "steps per replica (accepts 1e8 notation)");
  simulate->add_option("--replicas", opt.replicas, "independent replicas");
  simulate->add_option("--threads", opt.threads, "worker threads")
      ->check(CLI::PositiveNumber);
  simulate->add_flag("--fit", opt.fit,
                     "emit running-maximum envelope fits instead of paths");
  add_common_flags(simulate, opt, true);
  simulate->callback([&] { rc = run_simulate(opt, false); });

  CLI::App* fit = app.add_subcommand(
      "fit", "running-maximum envelope fits over replicas");
  fit->add_option("--steps", opt.steps,
                  "steps per replica (accepts 1e8 notation)");
  fit->add_option("--replicas", opt.replicas, "independent replicas");
  fit->add_option("--threads", opt.threads, "worker threads")
      ->check(CLI::PositiveNumber);
  add_common_flags(fit, opt, true);
  fit->callback([&] { rc = run_simulate(opt, true); });

  CLI::App* validate = app.add_subcommand(
      "validate", "canned verification suites with pass/fail lines");
  validate->add_option("--suite", opt.suite,
                       "martingale|oracle|bounds|mc|symmetry|limit-laws|"
                       "decomposition|all");
  validate->add_option("--trials", opt.trials,
                       "Monte Carlo trials for the mc suite");
  add_common_flags(validate, opt, false);
  validate->callback([&] { rc = run_validate(opt); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // --help / --version exit 0; usage errors 2
  } catch (const EnvironmentExhaustedError& e) {
    std::cerr << "error: " << e.what()
              << " (increase --sites or shorten --steps)\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return rc;
}
