#include "rwre/oracle.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rwre {

namespace {

namespace bmp = boost::multiprecision;
using Real50 = bmp::cpp_bin_float_50;
using Real150 = bmp::number<bmp::cpp_bin_float<150>, bmp::et_off>;
using Real500 = bmp::number<bmp::cpp_bin_float<500>, bmp::et_off>;
using Real2000 = bmp::number<bmp::cpp_bin_float<2000>, bmp::et_off>;

// Banded LU with partial pivoting for a tridiagonal system (LAPACK-gtsv
// layout: dl = subdiagonal, d = diagonal, du = superdiagonal; row swaps
// introduce one extra superdiagonal du2). Solves in place, returns x.
template <class Real>
std::vector<Real> solve_tridiagonal(std::vector<Real> dl, std::vector<Real> d,
                                    std::vector<Real> du,
                                    std::vector<Real> b) {
  const size_t n = d.size();
  std::vector<Real> du2(n >= 2 ? n - 2 : 0, Real(0));
  for (size_t i = 0; i + 1 < n; ++i) {
    if (abs(d[i]) >= abs(dl[i])) {
      // No interchange.
      if (d[i] == 0) throw std::runtime_error("tridiagonal solve: singular");
      const Real fact = dl[i] / d[i];
      d[i + 1] -= fact * du[i];
      b[i + 1] -= fact * b[i];
    } else {
      // Interchange rows i and i+1.
      const Real fact = d[i] / dl[i];
      d[i] = dl[i];
      const Real temp = d[i + 1];
      d[i + 1] = du[i] - fact * temp;
      if (i + 2 < n) {
        du2[i] = du[i + 1];
        du[i + 1] = -fact * du2[i];
      }
      du[i] = temp;
      const Real bt = b[i];
      b[i] = b[i + 1];
      b[i + 1] = bt - fact * b[i + 1];
    }
  }
  if (d[n - 1] == 0) throw std::runtime_error("tridiagonal solve: singular");

  std::vector<Real> x(n);
  x[n - 1] = b[n - 1] / d[n - 1];
  if (n >= 2) x[n - 2] = (b[n - 2] - du[n - 2] * x[n - 1]) / d[n - 2];
  for (size_t i = n >= 2 ? n - 2 : 0; i-- > 0;) {
    x[i] = (b[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / d[i];
  }
  return x;
}

struct EngineBase {
  virtual ~EngineBase() = default;
  virtual double solve_one(int64_t n) const = 0;
  virtual std::vector<double> solve_all(int64_t n) const = 0;
  virtual int64_t size() const = 0;
  virtual int digits() const = 0;
};

template <class Real>
class Engine final : public EngineBase {
 public:
  explicit Engine(const Environment& env, int64_t maxLevel) {
    p_.reserve(static_cast<size_t>(maxLevel));
    q_.reserve(static_cast<size_t>(maxLevel));
    for (int64_t j = 0; j < maxLevel; ++j) {
      const double lambda = env.lambda(j);
      Real p, q;
      if (std::abs(lambda) <= 690.0) {
        // Double-precision logistic values embed exactly into Real; their
        // 1e-16 relative input rounding moves log T by O(n * 1e-16), far
        // inside the comparison tolerance, while the solve itself still
        // needs the extended precision for conditioning.
        if (lambda >= 0.0) {
          const double e = std::exp(-lambda);
          q = Real(e / (1.0 + e));
          p = Real(1.0 / (1.0 + e));
        } else {
          const double e = std::exp(lambda);
          p = Real(e / (1.0 + e));
          q = Real(1.0 / (1.0 + e));
        }
      } else if (lambda > 0.0) {
        // Beyond double range: the outward probability is e^{-lambda} to
        // within 1e-299 relative; evaluate it in extended precision.
        q = exp(-Real(lambda));
        p = 1 - q;
      } else {
        p = exp(Real(lambda));
        q = 1 - p;
      }
      if (q == 0) {
        throw std::range_error(
            "HittingTimeOracle: odds ratio at site " + std::to_string(j) +
            " exceeds the representable range (log-odds " +
            std::to_string(lambda) +
            "); expected hitting times beyond this site are not "
            "representable — range exceeded");
      }
      p_.push_back(std::move(p));
      q_.push_back(std::move(q));
    }
  }

  int64_t size() const override { return static_cast<int64_t>(p_.size()); }
  int digits() const override {
    return static_cast<int>(std::numeric_limits<Real>::digits10);
  }

  double solve_one(int64_t n) const override {
    const std::vector<Real> u = solve(n);
    return log_to_double(u[0], "solve");
  }

  std::vector<double> solve_all(int64_t n) const override {
    const std::vector<Real> u = solve(n);
    std::vector<double> out(static_cast<size_t>(n) + 1);
    out[0] = -std::numeric_limits<double>::infinity();
    for (int64_t m = 1; m < n; ++m) {
      const Real tm = u[0] - u[static_cast<size_t>(m)];
      out[static_cast<size_t>(m)] = log_to_double(tm, "additivity");
    }
    out[static_cast<size_t>(n)] = log_to_double(u[0], "solve");
    return out;
  }

 private:
  std::vector<Real> solve(int64_t n) const {
    const auto un = static_cast<size_t>(n);
    // Unknowns u_0..u_{n-1}; u_n = 0 is eliminated from the last row.
    std::vector<Real> dl(un >= 1 ? un - 1 : 0), d(un),
        du(un >= 1 ? un - 1 : 0);
    std::vector<Real> b(un, Real(1));
    d[0] = q_[0];
    if (un >= 2) du[0] = -q_[0];
    for (size_t k = 1; k < un; ++k) {
      dl[k - 1] = -p_[k];
      // The diagonal must be exactly p_k + q_k, not the constant 1: the
      // stored probabilities are rounded values whose sum misses 1 by an
      // ulp-level amount, and writing 1 here would encode a *different*
      // (inconsistent) chain whose hitting times the ill-conditioned solve
      // then amplifies.  With the diagonal tied to the stored pair, the
      // system is exactly the one the step recurrence solves, laziness and
      // all, so both routes answer the same question.
      d[k] = p_[k] + q_[k];
      if (k + 1 < un) du[k] = -q_[k];
    }
    return solve_tridiagonal(std::move(dl), std::move(d), std::move(du),
                             std::move(b));
  }

  static double log_to_double(const Real& value, const char* what) {
    if (!(value > 0) || !(bmp::isfinite)(value)) {
      throw std::range_error(
          std::string("HittingTimeOracle: ") + what +
          " produced a non-positive or non-finite expected time — range "
          "exceeded");
    }
    // log via mantissa/exponent split: the result is only ever consumed at
    // double accuracy, and a full-precision log() at the high rungs costs
    // more than the entire banded solve.
    int exp2 = 0;
    const Real mantissa = frexp(value, &exp2);
    return std::log(static_cast<double>(mantissa)) +
           static_cast<double>(exp2) * std::log(2.0);
  }

  std::vector<Real> p_;
  std::vector<Real> q_;
};

// Upper bound on log T(m) for every m <= maxLevel, in plain doubles:
// log T(m) <= log 2 + 2 log m + max_{k<m} S_k + max(0, max_{k<m} -S_k).
double log_t_upper_bound(const Environment& env, int64_t maxLevel) {
  double s = 0.0, maxS = 0.0, maxNegS = 0.0;
  for (int64_t j = 0; j < maxLevel; ++j) {
    s += env.lambda(j);
    maxS = std::max(maxS, s);
    maxNegS = std::max(maxNegS, -s);
  }
  return std::log(2.0) + 2.0 * std::log(static_cast<double>(maxLevel)) +
         maxS + maxNegS;
}

}  // namespace

struct HittingTimeOracle::Impl {
  std::unique_ptr<EngineBase> engine;
};

HittingTimeOracle::HittingTimeOracle(const Environment& env, int64_t maxLevel)
    : impl_(std::make_unique<Impl>()) {
  if (maxLevel < 1 || maxLevel > env.size() || maxLevel > kMaxOracleLevel) {
    throw std::invalid_argument(
        "HittingTimeOracle: maxLevel must be in [1, min(env size, " +
        std::to_string(kMaxOracleLevel) + ")]");
  }
  // Decimal digits needed: B/ln10 for the conditioning, ~30 of headroom for
  // the answer's own accuracy and the additivity subtraction.
  const double bound = log_t_upper_bound(env, maxLevel);
  const double needed = bound / std::log(10.0) + 30.0;
  if (needed <= 50.0) {
    impl_->engine = std::make_unique<Engine<Real50>>(env, maxLevel);
  } else if (needed <= 150.0) {
    impl_->engine = std::make_unique<Engine<Real150>>(env, maxLevel);
  } else if (needed <= 500.0) {
    impl_->engine = std::make_unique<Engine<Real500>>(env, maxLevel);
  } else if (needed <= 2000.0) {
    impl_->engine = std::make_unique<Engine<Real2000>>(env, maxLevel);
  } else {
    throw std::range_error(
        "HittingTimeOracle: environment needs ~" +
        std::to_string(static_cast<int64_t>(needed)) +
        " decimal digits of working precision (log T bound " +
        std::to_string(bound) +
        "), beyond the top rung of the ladder — range exceeded");
  }
}

HittingTimeOracle::~HittingTimeOracle() = default;
HittingTimeOracle::HittingTimeOracle(HittingTimeOracle&&) noexcept = default;
HittingTimeOracle& HittingTimeOracle::operator=(HittingTimeOracle&&) noexcept =
    default;

int64_t HittingTimeOracle::max_level() const { return impl_->engine->size(); }

int HittingTimeOracle::decimal_digits() const {
  return impl_->engine->digits();
}

double HittingTimeOracle::log_expected_hitting_time(int64_t n) const {
  if (n < 1 || n > max_level()) {
    throw std::invalid_argument(
        "log_expected_hitting_time: target must be in [1, maxLevel]");
  }
  return impl_->engine->solve_one(n);
}

std::vector<double> HittingTimeOracle::log_hitting_times_upto(
    int64_t n) const {
  if (n < 1 || n > max_level()) {
    throw std::invalid_argument(
        "log_hitting_times_upto: target must be in [1, maxLevel]");
  }
  return impl_->engine->solve_all(n);
}

double hitting_time_oracle(const Environment& env, int64_t n) {
  return HittingTimeOracle(env, n).log_expected_hitting_time(n);
}

}  // namespace rwre
