#pragma once

// Risk-averse dividers: utility f(v) of the value v received, with f
// increasing and concave. Divisible goods give the divider a sure pile value;
// indivisible goods split by lottery add a second layer of risk.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "dnc/errors.hpp"
#include "dnc/model.hpp"
#include "dnc/oracle.hpp"
#include "dnc/priors.hpp"
#include "dnc/rng.hpp"

namespace dnc {

class RiskProfile {
 public:
  enum class Kind { neutral, sqrt_shifted, power };

  static RiskProfile neutral() { return RiskProfile(Kind::neutral, 0.0); }
  /// f(v) = sqrt(v - shift) on [shift, inf).
  static RiskProfile sqrt_shifted(double shift) {
    if (!std::isfinite(shift)) throw DomainError("shift must be finite");
    return RiskProfile(Kind::sqrt_shifted, shift);
  }
  /// f(v) = v^e on [0, inf), 0 < e <= 1.
  static RiskProfile power(double exponent) {
    if (!(exponent > 0.0 && exponent <= 1.0)) throw DomainError("power exponent must lie in (0, 1]");
    return RiskProfile(Kind::power, exponent);
  }

  Kind kind() const noexcept { return kind_; }
  double parameter() const noexcept { return param_; }

  double domain_min() const noexcept {
    switch (kind_) {
      case Kind::neutral: return -std::numeric_limits<double>::infinity();
      case Kind::sqrt_shifted: return param_;
      case Kind::power: return 0.0;
    }
    return 0.0;
  }

  bool in_domain(double v) const noexcept { return std::isfinite(v) && v >= domain_min(); }

  double operator()(double v) const {
    if (!in_domain(v)) throw DomainError("value " + std::to_string(v) + " outside the utility function's domain");
    switch (kind_) {
      case Kind::neutral: return v;
      case Kind::sqrt_shifted: return std::sqrt(v - param_);
      case Kind::power: return param_ == 1.0 ? v : std::pow(v, param_);
    }
    return v;
  }

  std::string describe() const {
    switch (kind_) {
      case Kind::neutral: return "neutral";
      case Kind::sqrt_shifted: return "sqrt_shifted(" + std::to_string(param_) + ")";
      case Kind::power: return "power(" + std::to_string(param_) + ")";
    }
    return "?";
  }

 private:
  RiskProfile(Kind k, double p) : kind_(k), param_(p) {}
  Kind kind_;
  double param_;
};

enum class RiskInterpretation { divisible, lottery };

/// Range of pile values any division can produce: [sum of negatives, sum of positives].
inline std::pair<double, double> reachable_values(std::span<const double> g) {
  double lo = 0.0, hi = 0.0;
  for (double v : g) (v < 0.0 ? lo : hi) += v;
  return {lo, hi};
}

/// Rejects f unless it covers every reachable pile value and passes a seeded
/// midpoint-concavity and monotonicity check there.
inline void check_risk_profile(const RiskProfile& f, std::span<const double> g, std::uint64_t seed = 0xc0ca) {
  const auto [lo, hi] = reachable_values(g);
  if (!f.in_domain(lo)) {
    throw DomainError("utility function " + f.describe() + " is undefined for reachable pile value " +
                      std::to_string(lo));
  }
  Rng rng(seed, 0xf);
  const double width = hi - lo;
  for (int k = 0; k < 256; ++k) {
    const double a = lo + width * rng.uniform(), b = lo + width * rng.uniform();
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double scale = 1.0 + std::abs(fa) + std::abs(fb);
    if (fm < 0.5 * (fa + fb) - 1e-12 * scale) throw DomainError("utility function fails the concavity check");
    if ((a < b && fa > fb + 1e-12 * scale) || (b < a && fb > fa + 1e-12 * scale)) {
      throw DomainError("utility function fails the monotonicity check");
    }
  }
}

/// (1 - P) f(v1) + P f(v2) with v1, v2 the divider's pile values.
inline double risk_utility_divisible(std::span<const double> g, const Division& d, const PriorSpec& prior,
                                     const RiskProfile& f, const MonteCarloOptions& mc = {}) {
  const auto q = d.q();
  const double P = pile1_probability(prior, q, mc);
  const auto [v1, v2] = pile_values(g, d);
  double out = 0.0;
  if (P < 1.0) out += (1.0 - P) * f(v1);
  if (P > 0.0) out += P * f(v2);
  return out;
}

namespace detail {

/// E f(sum of g_i over goods kept), each good kept independently w.p. keep[i].
inline double lottery_expectation(std::span<const double> g, std::span<const double> keep, const RiskProfile& f) {
  const std::size_t n = g.size();
  // Goods with a sure outcome are folded into a constant.
  double sure = 0.0;
  std::vector<std::size_t> random;
  for (std::size_t i = 0; i < n; ++i) {
    if (keep[i] >= 1.0) {
      sure += g[i];
    } else if (keep[i] > 0.0) {
      random.push_back(i);
    }
  }
  const std::size_t m = random.size();
  double total = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    double prob = 1.0, value = sure;
    for (std::size_t k = 0; k < m; ++k) {
      const std::size_t i = random[k];
      if (mask >> k & 1U) {
        prob *= keep[i];
        value += g[i];
      } else {
        prob *= 1.0 - keep[i];
      }
    }
    total += prob * f(value);
  }
  return total;
}

}  // namespace detail

inline constexpr std::size_t kLotteryMaxGoods = 20;

/// Expected f-utility when fractional shares are lotteries resolved after the
/// chooser has picked a pile.
inline double risk_utility_lottery(std::span<const double> g, const Division& d, const PriorSpec& prior,
                                   const RiskProfile& f, const MonteCarloOptions& mc = {}) {
  const std::size_t n = g.size();
  if (n > kLotteryMaxGoods) throw CapacityError("lottery enumeration supports at most 20 goods", kLotteryMaxGoods);
  if (d.size() != n) throw DomainError("division and values differ in length");
  const double P = pile1_probability(prior, d.q(), mc);
  std::vector<double> keep_if_pile1(n), keep_if_pile2(n);
  for (std::size_t i = 0; i < n; ++i) {
    keep_if_pile1[i] = 1.0 - d[i];
    keep_if_pile2[i] = d[i];
  }
  double out = 0.0;
  if (P > 0.0) out += P * detail::lottery_expectation(g, keep_if_pile1, f);
  if (P < 1.0) out += (1.0 - P) * detail::lottery_expectation(g, keep_if_pile2, f);
  return out;
}

inline double risk_utility(std::span<const double> g, const Division& d, const PriorSpec& prior, const RiskProfile& f,
                           RiskInterpretation how) {
  return how == RiskInterpretation::divisible ? risk_utility_divisible(g, d, prior, f)
                                              : risk_utility_lottery(g, d, prior, f);
}

/// Grid search for the division maximizing expected f-utility.
inline SolveReport solve_risk_averse(const Instance& instance, const RiskProfile& f, RiskInterpretation how,
                                     double resolution) {
  validate_instance(instance);
  check_grid_prior(instance);
  const auto& g = instance.divider_values;
  check_risk_profile(f, g);
  const QGrid grid(instance.n(), resolution);
  const auto best = grid_maximize(grid, [&](std::span<const double> q) {
    const Division d = p_of_q(q);
    const double P = pile1_probability(instance.prior, q);
    double value;
    if (how == RiskInterpretation::divisible) {
      const auto [v1, v2] = pile_values(g, d);
      value = (P < 1.0 ? (1.0 - P) * f(v1) : 0.0) + (P > 0.0 ? P * f(v2) : 0.0);
    } else {
      value = risk_utility_lottery(g, d, instance.prior, f);
    }
    return std::pair{value, P};
  });

  Division winner = p_of_q(best.q);
  double value = best.utility;
  if (dot(best.q, g) < 0.0) {
    const Division flipped = reflect(winner);
    const double alt = risk_utility(g, flipped, instance.prior, f, how);
    // Reflection is exact for continuous priors; allow rounding noise.
    if (alt >= value - 1e-12 * (1.0 + std::abs(value))) {
      winner = flipped;
      value = alt;
    }
  }

  SolveReport report = exact_eval(instance, winner);
  report.divider_utility = value;
  report.method = SolveMethod::risk_grid;
  report.iterations = grid.total;
  report.notes = std::string("risk ") + f.describe() +
                 (how == RiskInterpretation::divisible ? " divisible" : " lottery") +
                 "; divider_utility is expected f-utility; grid points=" + std::to_string(grid.total);
  return report;
}

}  // namespace dnc
