#pragma once

// Independent verification oracle for expected first hitting times.
//
// Solves the first-step linear system for u_k = E_k[first time to reach n]:
//   q_0 u_0 - q_0 u_1                    = 1        (reflecting origin)
//   -p_k u_{k-1} + u_k - q_k u_{k+1}     = 1        (0 < k < n)
//   u_n                                  = 0        (absorbing target)
// by banded LU elimination WITH partial pivoting in extended precision.
// Plain Thomas elimination is deliberately avoided: on this matrix its
// forward sweep reduces algebraically to the very Delta-recurrence under
// test, which would make the check circular. Row pivoting breaks that
// identity, so the oracle exercises an independent computational path.
//
// Precision is chosen per environment. The elimination's forward error grows
// like eps * T(n) (the system's norm condition number is of order the answer
// itself), so the working precision must scale with an upper bound B on
// log T(n); the constructor prescans the log-odds, bounds B in double
// arithmetic, and picks the smallest rung of a fixed precision ladder with
// ~30 decimal digits of headroom beyond B/ln 10. Environments beyond the top
// rung are refused with a range error rather than silently mis-solved.

#include <cstdint>
#include <memory>
#include <vector>

#include "rwre/environment.hpp"

namespace rwre {

// Levels beyond this are refused: the oracle exists to catch transcription
// bugs at verification scale, not to compete with the log-space recurrences.
inline constexpr int64_t kMaxOracleLevel = 2000;

class HittingTimeOracle {
 public:
  // Prepares step probabilities for sites 0..maxLevel-1 and selects the
  // precision rung. Throws std::invalid_argument if maxLevel is outside
  // [1, min(env.size(), kMaxOracleLevel)], and std::range_error if either
  // some site's odds ratio e^{lambda} overflows the extended-precision
  // exponent range (the site would look like an impassable wall and the
  // truncated system would silently describe a different chain) or the
  // required working precision exceeds the top rung of the ladder.
  HittingTimeOracle(const Environment& env, int64_t maxLevel);
  ~HittingTimeOracle();
  HittingTimeOracle(HittingTimeOracle&&) noexcept;
  HittingTimeOracle& operator=(HittingTimeOracle&&) noexcept;

  // log E_0[first hitting time of level n], by one fresh banded solve of
  // size n.
  double log_expected_hitting_time(int64_t n) const;

  // log E_0[tau_m] for every m = 1..n from ONE banded solve of size n:
  // the solve's unknowns satisfy E_0[tau_m] = u_0 - u_m (level m must be
  // crossed on the way to n), and the chosen precision keeps that
  // subtraction accurate across the whole range. Returned vector has
  // length n+1 with [0] = -infinity (tau_0 = 0).
  std::vector<double> log_hitting_times_upto(int64_t n) const;

  int64_t max_level() const;
  int decimal_digits() const;  // precision rung selected at construction

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// One-shot convenience wrapper: log E_0[tau_n] for a single target level.
double hitting_time_oracle(const Environment& env, int64_t n);

}  // namespace rwre
