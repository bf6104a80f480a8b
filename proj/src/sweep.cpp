#include "rwre/sweep.hpp"

#include <fstream>
#include <ostream>
#include <stdexcept>
#include <variant>

#include "rwre/functionals.hpp"
#include "rwre/io.hpp"
#include "rwre/thread_pool.hpp"

namespace rwre {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

const json& field(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) {
    throw std::invalid_argument(std::string("grid: missing field \"") + key +
                                "\"");
  }
  return *it;
}

bool scored_prediction(PredictedPhase predicted) {
  return predicted == PredictedPhase::kTransient ||
         predicted == PredictedPhase::kRecurrent ||
         predicted == PredictedPhase::kRecurrentNull;
}

// Parameter columns; a law leaves the columns it does not have empty.
void append_dope_columns(std::ostream& out, const DopeProfile& dope) {
  switch (dope.kind()) {
    case DopeKind::kZero:
      out << "zero,,";
      break;
    case DopeKind::kOne:
      out << "one,,";
      break;
    case DopeKind::kPowerLaw:
      out << "power_law," << format_double(dope.beta()) << ',';
      break;
    case DopeKind::kOneMinusPowerLaw:
      out << "one_minus_power_law," << format_double(dope.beta()) << ',';
      break;
    case DopeKind::kConstant:
      out << "constant,," << format_double(dope.constant());
      break;
  }
}

void append_zeta_columns(std::ostream& out, const ZetaRegime& zeta) {
  std::visit(
      [&](const auto& law) {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, RademacherZeta>) {
          out << "rademacher,,,,,";
        } else if constexpr (std::is_same_v<T, GaussianZeta>) {
          out << "gaussian," << format_double(law.sigma) << ",,,,";
        } else if constexpr (std::is_same_v<T, HeavySymmetricZeta>) {
          out << "heavy_symmetric,," << format_double(law.alpha) << ','
              << format_double(law.c) << ",,";
        } else {
          out << "heavy_asymmetric,,,," << format_double(law.alpha_pos) << ','
              << format_double(law.alpha_neg);
        }
      },
      zeta);
}

}  // namespace

void SweepGrid::validate() const {
  if (deltas.empty() || dopes.empty() || zetas.empty()) {
    throw std::invalid_argument("grid: deltas, dopes, zetas must be non-empty");
  }
  if (envsPerCell < 1) {
    throw std::invalid_argument("grid: envs_per_cell must be >= 1");
  }
  if (truncation < 1) {
    throw std::invalid_argument("grid: truncation must be >= 1");
  }
  for (const double d : deltas) {
    if (!(d > -1.0 && d < 1.0)) {
      throw std::invalid_argument("grid: deltas must lie in (-1, 1)");
    }
  }
  for (const ZetaRegime& z : zetas) validate_regime(z);
}

SweepGrid grid_from_json(const json& j) {
  SweepGrid grid;
  for (const json& d : field(j, "deltas")) {
    grid.deltas.push_back(d.get<double>());
  }
  for (const json& d : field(j, "dopes")) {
    grid.dopes.push_back(dope_from_json(d));
  }
  for (const json& z : field(j, "zetas")) {
    grid.zetas.push_back(zeta_from_json(z));
  }
  grid.envsPerCell = field(j, "envs_per_cell").get<int64_t>();
  grid.truncation = field(j, "truncation").get<int64_t>();
  grid.seed = field(j, "seed").get<uint64_t>();
  grid.validate();
  return grid;
}

ordered_json grid_to_json(const SweepGrid& grid) {
  ordered_json j;
  j["deltas"] = grid.deltas;
  ordered_json dopes = ordered_json::array();
  for (const DopeProfile& d : grid.dopes) dopes.push_back(dope_to_json(d));
  j["dopes"] = std::move(dopes);
  ordered_json zetas = ordered_json::array();
  for (const ZetaRegime& z : grid.zetas) zetas.push_back(zeta_to_json(z));
  j["zetas"] = std::move(zetas);
  j["envs_per_cell"] = grid.envsPerCell;
  j["truncation"] = grid.truncation;
  j["seed"] = grid.seed;
  return j;
}

SweepGrid load_grid_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open grid file: " + path);
  }
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("bad JSON in " + path + ": " + e.what());
  }
  return grid_from_json(j);
}

std::vector<SweepCell> phase_sweep(const SweepGrid& grid, int64_t threads) {
  grid.validate();

  std::vector<SweepCell> cells;
  cells.reserve(static_cast<size_t>(grid.cells()));
  for (const double delta : grid.deltas) {
    for (const DopeProfile& dope : grid.dopes) {
      for (const ZetaRegime& zeta : grid.zetas) {
        SweepCell cell;
        cell.index = static_cast<int64_t>(cells.size());
        cell.spec.delta = delta;
        cell.spec.dope = dope;
        cell.spec.zeta = zeta;
        cell.spec.length = grid.truncation;
        cell.spec.seed = grid.seed;
        cell.predicted = predicted_regime(cell.spec);
        cell.scored = scored_prediction(cell.predicted);
        cells.push_back(std::move(cell));
      }
    }
  }

  // One work unit per (cell, replica); each writes one slot.
  const int64_t K = grid.envsPerCell;
  const int64_t units = grid.cells() * K;
  std::vector<EmpiricalPhase> verdicts(static_cast<size_t>(units));
  parallel_for_index(units, threads, [&](int64_t unit) {
    EnvironmentSpec spec = cells[static_cast<size_t>(unit / K)].spec;
    spec.seed = derive_seed(grid.seed, StreamDomain::kSweepUnit,
                            static_cast<uint64_t>(unit));
    const Environment env = sample_environment(spec);
    const QuenchedFunctionals fn = compute(env, grid.truncation);
    verdicts[static_cast<size_t>(unit)] = classify(env, fn).empirical;
  });

  // Single-threaded reduction in unit order: identical for every schedule.
  for (int64_t unit = 0; unit < units; ++unit) {
    SweepCell& cell = cells[static_cast<size_t>(unit / K)];
    const EmpiricalPhase verdict = verdicts[static_cast<size_t>(unit)];
    cell.verdictCounts[static_cast<size_t>(verdict)] += 1;
    cell.agreements += phases_agree(verdict, cell.predicted) ? 1 : 0;
  }
  return cells;
}

void write_sweep_csv(std::ostream& out, const ordered_json& config,
                     const SweepGrid& grid,
                     const std::vector<SweepCell>& cells) {
  write_csv_run_header(out, "sweep", config, grid.seed);
  out << "cell,delta,dope_kind,dope_beta,dope_phi,zeta_kind,zeta_sigma,"
         "zeta_alpha,zeta_c,zeta_alpha_pos,zeta_alpha_neg,predicted,"
         "n_transient,n_null_recurrent,n_positive_recurrent,n_indeterminate,"
         "agreement\n";
  for (const SweepCell& cell : cells) {
    out << cell.index << ',' << format_double(cell.spec.delta) << ',';
    append_dope_columns(out, cell.spec.dope);
    out << ',';
    append_zeta_columns(out, cell.spec.zeta);
    out << ',' << to_string(cell.predicted);
    for (const int64_t count : cell.verdictCounts) out << ',' << count;
    out << ',';
    if (cell.scored) {
      out << format_double(cell.agreement_rate(grid.envsPerCell));
    }
    out << '\n';
  }
}

}  // namespace rwre
