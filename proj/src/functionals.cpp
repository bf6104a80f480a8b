#include "rwre/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rwre {

namespace {

// Stable logistic: p = 1/(1+e^{-x}) without overflow in either tail.
double expit(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

QuenchedFunctionals compute(const Environment& env, int64_t upTo) {
  if (upTo < 1 || upTo > env.size()) {
    throw std::invalid_argument("compute: upTo must be in [1, env.size()]");
  }
  QuenchedFunctionals out;
  const auto n = static_cast<size_t>(upTo);
  out.S.resize(n);
  out.logD.resize(n);
  out.maxPrefix.resize(n);
  out.logDelta.resize(n);
  out.logF.resize(n + 1);
  out.logT.resize(n + 1);
  out.logF[0] = 0.0;       // f(0) = D_0 = 1
  out.logT[0] = kNegInf;   // T(0) = 0

  FunctionalsAccumulator acc;
  for (size_t i = 0; i < n; ++i) {
    out.logD[i] = acc.s();  // S_{i-1}, which is 0 for i = 0
    acc.push(env.lambda(static_cast<int64_t>(i)));
    out.S[i] = acc.s();
    out.maxPrefix[i] = acc.max_s();
    out.logDelta[i] = acc.log_delta();
    out.logF[i + 1] = acc.log_f();
    out.logT[i + 1] = acc.log_t();
  }
  return out;
}

ResidualReport martingale_residuals(const Environment& env,
                                    const QuenchedFunctionals& fn,
                                    int64_t upTo) {
  if (upTo < 1 || upTo + 1 > static_cast<int64_t>(fn.logF.size())) {
    throw std::invalid_argument(
        "martingale_residuals: upTo must be in [1, computed levels]");
  }

  // The identities are checked in linear space; restrict to the prefix where
  // both f and T stay below a safe representability cap.
  constexpr double kLogCap = 644.0;  // e^644 ~ 1e280, well under overflow
  int64_t window = upTo;
  for (int64_t i = 1; i <= upTo; ++i) {
    if (fn.logF[static_cast<size_t>(i)] > kLogCap ||
        fn.logT[static_cast<size_t>(i)] > kLogCap) {
      window = i - 1;
      break;
    }
  }

  ResidualReport rep;
  rep.windowEnd = window;
  rep.windowShrunk = window < upTo;
  if (window < 1) return rep;

  // Recompute f and T in linear space (values, not logs) over the window.
  std::vector<double> f(static_cast<size_t>(window) + 1);
  std::vector<double> T(static_cast<size_t>(window) + 1);
  f[0] = 1.0;
  T[0] = 0.0;
  double D = 1.0;       // D_i
  double Delta = 0.0;   // Delta_{i-1}
  for (int64_t i = 0; i < window; ++i) {
    const double lambda = env.lambda(i);
    const double p = expit(lambda);
    const double q = expit(-lambda);
    Delta = i == 0 ? 1.0 / q : (1.0 + p * Delta) / q;
    T[static_cast<size_t>(i) + 1] = T[static_cast<size_t>(i)] + Delta;
    D *= p / q;
    f[static_cast<size_t>(i) + 1] = f[static_cast<size_t>(i)] + D;
  }

  auto track = [](double resid, double scale, double& maxAbs, double& maxRel) {
    const double a = std::abs(resid);
    maxAbs = std::max(maxAbs, a);
    maxRel = std::max(maxRel, a / scale);
  };

  // Reflecting-origin boundary identities.
  {
    const double lambda0 = env.lambda(0);
    const double p0 = expit(lambda0);
    const double q0 = expit(-lambda0);
    // The f identity is evaluated through the subtraction f(1) - f(0), whose
    // absolute error floor is one ulp of f(1), so f(1) is the backward-error
    // scale of the check -- the same convention as the interior sites, which
    // normalise by f(k).  Normalising by p_0 instead would misreport that
    // roundoff floor as a violation whenever a site has such enormous outward
    // odds that p_0 drops below ulp(f(1)).
    track(q0 * (f[1] - f[0]) - p0, f[1], rep.maxAbsF, rep.maxRelF);
    track(q0 * T[1] - 1.0, 1.0, rep.maxAbsT, rep.maxRelT);
  }

  // Interior identities at sites 1..window-1.
  for (int64_t k = 1; k < window; ++k) {
    const double lambda = env.lambda(k);
    const double p = expit(lambda);
    const double q = expit(-lambda);
    const auto uk = static_cast<size_t>(k);
    const double residF = p * f[uk - 1] + q * f[uk + 1] - f[uk];
    const double residT = p * T[uk - 1] + q * T[uk + 1] - T[uk] - 1.0;
    track(residF, f[uk], rep.maxAbsF, rep.maxRelF);
    track(residT, std::max(T[uk], 1.0), rep.maxAbsT, rep.maxRelT);
  }
  return rep;
}

BoundReport bound_sandwich(const Environment& env,
                           const QuenchedFunctionals& fn, int64_t upTo) {
  if (upTo < 1 || upTo > fn.sites()) {
    throw std::invalid_argument(
        "bound_sandwich: upTo must be in [1, computed sites]");
  }
  (void)env;

  BoundReport rep;
  rep.upTo = upTo;
  auto check = [&rep](double slack, double& minSlack, bool& seen,
                      int64_t level) {
    if (!seen || slack < minSlack) minSlack = slack;
    seen = true;
    if (slack < 0.0) {
      ++rep.violations;
      if (rep.firstViolation < 0) rep.firstViolation = level;
    }
  };

  constexpr double kLog2 = 0.6931471805599453;
  double maxS = -std::numeric_limits<double>::infinity();  // max_{k<i} S_k
  double maxNegS = 0.0;  // max(0, max_{k<i} -S_k): the S_{-1} term clamps at 0
  bool haveF = false, haveTL = false, haveT1 = false, haveCh = false;
  for (int64_t i = 1; i <= upTo; ++i) {
    const auto ui = static_cast<size_t>(i);
    // Lower bounds: both f(i) and T(i) dominate e^{max prefix of S up to i-1}.
    const double low = std::max(0.0, fn.maxPrefix[ui - 1]);
    check(fn.logF[ui] - low, rep.minSlackFLow, haveF, i);
    check(fn.logT[ui] - low, rep.minSlackTLow, haveTL, i);
    // Upper bounds on T(i). Both are computed from the shared `base` term and
    // the comparison fl(a+b) <= 2*max(a,b) so that tUp1 <= tUp2 holds
    // bit-for-bit under round-to-nearest, not merely in exact arithmetic.
    maxS = std::max(maxS, fn.S[ui - 1]);
    maxNegS = std::max(maxNegS, -fn.S[ui - 1]);
    const double base =
        kLog2 + 2.0 * std::log(static_cast<double>(i));
    const double tUp1 = base + (maxS + maxNegS);
    const double tUp2 = base + 2.0 * std::max(maxS, maxNegS);
    check(tUp1 - fn.logT[ui], rep.minSlackTUp1, haveT1, i);
    check(tUp2 - tUp1, rep.minSlackChain, haveCh, i);
  }
  return rep;
}

MonteCarloHit monte_carlo_hitting(const Environment& env, int64_t n,
                                  uint64_t trials, CounterStream stream,
                                  uint64_t maxTotalSteps) {
  if (n < 1 || n > env.size()) {
    throw std::invalid_argument(
        "monte_carlo_hitting: target level must be in [1, env.size()]");
  }
  // Precompute P[step toward origin] for the sites the walk can visit.
  std::vector<double> pLeft(static_cast<size_t>(n));
  for (int64_t j = 0; j < n; ++j) {
    pLeft[static_cast<size_t>(j)] = env.p_left(j);
  }

  MonteCarloHit out;
  double sum = 0.0;
  double sumSq = 0.0;
  uint64_t stepsUsed = 0;
  for (uint64_t t = 0; t < trials; ++t) {
    int64_t x = 0;
    uint64_t steps = 0;
    while (x < n) {
      const double u = stream.next_unit_open();
      if (u < pLeft[static_cast<size_t>(x)]) {
        if (x > 0) --x;  // at 0 the "toward origin" step stays at 0
      } else {
        ++x;
      }
      ++steps;
      if (++stepsUsed >= maxTotalSteps) {
        out.budgetExceeded = true;
        break;
      }
    }
    if (out.budgetExceeded) break;
    const auto s = static_cast<double>(steps);
    sum += s;
    sumSq += s * s;
    ++out.trials;
  }
  if (out.trials > 0) {
    const auto m = static_cast<double>(out.trials);
    out.mean = sum / m;
    if (out.trials > 1) {
      const double var = std::max(0.0, (sumSq - sum * sum / m) / (m - 1.0));
      out.stderr_ = std::sqrt(var / m);
    }
  }
  return out;
}

}  // namespace rwre
