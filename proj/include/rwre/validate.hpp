#pragma once

// Canned validation suites behind the command-line `validate` command.
//
// Each suite runs a fixed battery of checks at desk scale (seconds, not
// minutes) and reports one line per check.  Statistical checks assert
// exactly the envelopes declared by the modules under test; the battery is
// deterministic given the root seed.

#include <cstdint>
#include <string>
#include <vector>

namespace rwre {

struct ValidationCheck {
  std::string name;    // stable identifier, e.g. "martingale_identities"
  bool passed = false;
  std::string detail;  // key numbers: measured value vs threshold
};

// Suite names accepted by run_validation_suite, in execution order of "all".
const std::vector<std::string>& validation_suite_names();

// Run one suite ("martingale", "oracle", "bounds", "mc", "symmetry",
// "limit-laws", "decomposition") or "all".  `trials` bounds the Monte Carlo
// trial count of the "mc" suite (0 picks the default).  Throws
// std::invalid_argument for an unknown suite name.
std::vector<ValidationCheck> run_validation_suite(const std::string& suite,
                                                  uint64_t seed,
                                                  uint64_t trials);

}  // namespace rwre
