#pragma once

// Phase-diagram sweep: classify sampled environments over a parameter grid
// and score agreement against the closed-form phase table.
//
// The grid is the cross product deltas x dopes x zetas, enumerated with zeta
// varying fastest and delta slowest.  Cell c, replica r draws its
// environment seed as derive_seed(grid.seed, kSweepUnit, c*K + r), so
// results are a pure function of the root seed and are identical for every
// thread count.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "json.hpp"
#include "rwre/classifier.hpp"
#include "rwre/environment.hpp"

namespace rwre {

struct SweepGrid {
  std::vector<double> deltas;
  std::vector<DopeProfile> dopes;
  std::vector<ZetaRegime> zetas;
  int64_t envsPerCell = 20;
  int64_t truncation = 1000000;  // sites classified per environment
  uint64_t seed = 0;

  int64_t cells() const {
    return static_cast<int64_t>(deltas.size() * dopes.size() * zetas.size());
  }
  void validate() const;  // throws std::invalid_argument
};

// Grid JSON schema:
//   {"deltas": [..], "dopes": [{"kind": ..}, ..], "zetas": [{"kind": ..}, ..],
//    "envs_per_cell": K, "truncation": N, "seed": s}
SweepGrid grid_from_json(const nlohmann::json& j);
nlohmann::ordered_json grid_to_json(const SweepGrid& grid);
SweepGrid load_grid_file(const std::string& path);

struct SweepCell {
  int64_t index = 0;         // position in the enumeration order
  EnvironmentSpec spec;      // parameters of the cell (seed = root seed)
  PredictedPhase predicted = PredictedPhase::kNotCovered;
  // Verdict counts indexed by EmpiricalPhase (transient, null recurrent,
  // positive recurrent, indeterminate).
  std::array<int64_t, 4> verdictCounts{};
  int64_t agreements = 0;
  bool scored = false;  // false for Boundary / NotCovered predictions

  double agreement_rate(int64_t envsPerCell) const {
    return static_cast<double>(agreements) / static_cast<double>(envsPerCell);
  }
};

// Classify envsPerCell independent environments per cell on up to `threads`
// workers.  Deterministic for every thread count.
std::vector<SweepCell> phase_sweep(const SweepGrid& grid, int64_t threads);

// One CSV row per cell: parameters (empty columns where a law has no such
// parameter), predicted phase, verdict counts, agreement (empty when the
// cell is not scored).
void write_sweep_csv(std::ostream& out, const nlohmann::ordered_json& config,
                     const SweepGrid& grid,
                     const std::vector<SweepCell>& cells);

}  // namespace rwre
