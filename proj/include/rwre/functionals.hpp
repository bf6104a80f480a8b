#pragma once

// Quenched Lyapunov functionals of one environment, all in log space.
//
// With the odds ratio D_i = prod_{j<i} (p_j/q_j) = e^{S_{i-1}}:
//   f(n) = sum_{i=0}^{n} D_i          (harmonic-like scale object; f -> inf
//                                      iff the chain is recurrent)
//   Delta_i = expected time to step from level i to i+1,
//             Delta_i = 1/q_i + (p_i/q_i) Delta_{i-1}
//   T(n) = E[first hitting time of n from 0] = sum_{i<n} Delta_i
// All recurrences are carried as log-values via stable log-add-exp with a
// fixed ascending accumulation order.

#include <cstdint>
#include <vector>

#include "rwre/environment.hpp"
#include "rwre/logspace.hpp"

namespace rwre {

struct QuenchedFunctionals {
  // Sized n (site-indexed):
  std::vector<double> S;          // S[i] = sum_{j<=i} lambda_j
  std::vector<double> logD;       // log D_i = S_{i-1}; logD[0] = 0
  std::vector<double> maxPrefix;  // max_{k<=i} S_k
  std::vector<double> logDelta;   // log Delta_i; logDelta[0] = -log q_0
  // Sized n+1 (level-indexed; level n is determined by the first n sites):
  std::vector<double> logF;  // logF[i] = log f(i); logF[0] = 0
  std::vector<double> logT;  // logT[i] = log T(i); logT[0] = -inf (T(0) = 0)

  int64_t sites() const { return static_cast<int64_t>(S.size()); }
};

// Single forward pass with O(1) state; compute() fills its arrays from this
// same accumulator, so streaming consumers (sweeps over 10^6..10^8 sites) see
// bit-identical values without materializing arrays.
class FunctionalsAccumulator {
 public:
  FunctionalsAccumulator() {
    f_.add(0.0);     // the S_{-1} = 0 term of f
    inv_.add(0.0);   // likewise for sum e^{-S_{k-1}}
  }

  void push(double lambda) {
    const double sp = softplus(lambda);  // -log q at this site
    logDelta_ = count_ == 0 ? sp : logaddexp(sp, lambda + logDelta_);
    t_.add(logDelta_);
    s_ += lambda;
    if (count_ == 0 || s_ > maxS_) maxS_ = s_;
    if (count_ == 0 || s_ < minS_) minS_ = s_;
    f_.add(s_);
    inv_.add(-s_);
    ++count_;
  }

  int64_t count() const { return count_; }   // sites pushed so far: p
  double s() const { return s_; }            // S_{p-1}
  double max_s() const { return maxS_; }     // max_{k<=p-1} S_k
  double min_s() const { return minS_; }
  double log_delta() const { return logDelta_; }  // log Delta_{p-1}
  double log_f() const { return f_.value(); }     // log f(p)
  double log_t() const { return t_.value(); }     // log T(p)
  double log_inv_d() const { return inv_.value(); }  // log sum_{i<=p} e^{-S_{i-1}}

 private:
  int64_t count_ = 0;
  double s_ = 0.0;
  double maxS_ = 0.0;
  double minS_ = 0.0;
  double logDelta_ = kNegInf;
  LogSumAccumulator f_;
  LogSumAccumulator t_;
  LogSumAccumulator inv_;
};

// Materialize all functionals for the first `upTo` sites (upTo <= env size).
QuenchedFunctionals compute(const Environment& env, int64_t upTo);

// ---------------------------------------------------------------------------
// Identity and bound verification.

// Martingale-identity residuals, evaluated in LINEAR space over the prefix
// window where f and T are representable in double precision (the window
// shrinks automatically; `windowEnd` reports how far it reached). For
// interior sites 1 <= k < windowEnd:
//   residF_k = p_k f(k-1) + q_k f(k+1) - f(k)            (harmonic identity)
//   residT_k = p_k T(k-1) + q_k T(k+1) - T(k) - 1        (unit-drift identity)
// and at the reflecting origin:
//   q_0 (f(1) - f(0)) - p_0   (the one-step drift of f at 0 equals q_0 D_1 = p_0)
//   q_0 T(1) - 1              (T(1) = Delta_0 = 1/q_0)
struct ResidualReport {
  double maxAbsF = 0.0;
  double maxAbsT = 0.0;
  double maxRelF = 0.0;  // residF_k / f(k); boundary term divided by f(1),
                         // the scale of the subtraction it is evaluated through
  double maxRelT = 0.0;  // residT_k / max(T(k), 1)
  int64_t windowEnd = 0;  // identities checked at sites 1..windowEnd-1
  bool windowShrunk = false;
};
ResidualReport martingale_residuals(const Environment& env,
                                    const QuenchedFunctionals& fn,
                                    int64_t upTo);

// Two-sided bound verification for every level i <= upTo:
//   logF[i]  >= max_{0<=k<=i} S_{k-1}                               (fLow)
//   logT[i]  >= max_{0<=k<=i} S_{k-1}                        (tLow, i >= 1)
//   logT[i]  <= log 2 + 2 log i + maxS_i + max(0, maxNegS_i)        (tUp1)
//   tUp1_i   <= log 2 + 2 log i + 2 max_k |S_k|                     (tUp2)
// where maxS_i = max_{0<=k<i} S_k and maxNegS_i = max_{0<=k<i} (-S_k). The
// max(0, .) clamp in tUp1 is the empty-prefix term S_{-1} = 0 of the
// expansion Delta_k = sum_j (1/q_j) e^{S_k - S_j}; without it the bound is
// false for environments whose S never dips below zero.
struct BoundReport {
  int64_t upTo = 0;
  int64_t violations = 0;      // strict violations across all four relations
  int64_t firstViolation = -1; // level index of the first violation, if any
  double minSlackFLow = 0.0;
  double minSlackTLow = 0.0;
  double minSlackTUp1 = 0.0;
  double minSlackChain = 0.0;  // min of tUp2 - tUp1
};
BoundReport bound_sandwich(const Environment& env,
                           const QuenchedFunctionals& fn, int64_t upTo);

// ---------------------------------------------------------------------------
// Stochastic oracle: direct simulation of the first hitting time of level n.

struct MonteCarloHit {
  double mean = 0.0;
  double stderr_ = 0.0;       // standard error of the mean
  uint64_t trials = 0;        // trials actually completed
  bool budgetExceeded = false;
};
MonteCarloHit monte_carlo_hitting(const Environment& env, int64_t n,
                                  uint64_t trials, CounterStream stream,
                                  uint64_t maxTotalSteps = ~0ull);

}  // namespace rwre
