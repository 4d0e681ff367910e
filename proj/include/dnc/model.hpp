#pragma once

// Core domain types for the divide-and-choose game: divisions, instances,
// solve reports, and the algebra relating the pile-1 fractions p to the
// auxiliary coordinates q = 2p - 1.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dnc/errors.hpp"
#include "dnc/prior_types.hpp"

namespace dnc {

/// Fractions p_i in [0, 1] of each good placed in pile 1. q is always derived.
class Division {
 public:
  Division() = default;
  explicit Division(std::vector<double> p) : p_(std::move(p)) {
    for (double v : p_) {
      if (!(v >= 0.0 && v <= 1.0)) throw DomainError("division fraction outside [0,1]");
    }
  }

  static Division even(std::size_t n) { return Division(std::vector<double>(n, 0.5)); }

  std::size_t size() const noexcept { return p_.size(); }
  std::span<const double> p() const noexcept { return p_; }
  double operator[](std::size_t i) const { return p_[i]; }

  std::vector<double> q() const {
    std::vector<double> out(p_.size());
    std::transform(p_.begin(), p_.end(), out.begin(), [](double v) { return 2.0 * v - 1.0; });
    return out;
  }

  friend bool operator==(const Division&, const Division&) = default;

 private:
  std::vector<double> p_;
};

struct Instance {
  std::vector<double> divider_values;
  PriorSpec prior;

  std::size_t n() const noexcept { return divider_values.size(); }
};

inline void validate_divider_values(std::span<const double> g) {
  if (g.empty()) throw DomainError("instance must contain at least one good");
  bool any_nonzero = false;
  for (double v : g) {
    if (!std::isfinite(v)) throw DomainError("divider values must be finite");
    any_nonzero = any_nonzero || v != 0.0;
  }
  if (!any_nonzero) throw DomainError("divider values must be not all zero");
}

enum class SolveMethod { normal_fptas, discrete_exact, grid_oracle, risk_grid, exact_eval, menu_search };

inline std::string_view to_string(SolveMethod m) {
  switch (m) {
    case SolveMethod::normal_fptas: return "normal_fptas";
    case SolveMethod::discrete_exact: return "discrete_exact";
    case SolveMethod::grid_oracle: return "grid_oracle";
    case SolveMethod::risk_grid: return "risk_grid";
    case SolveMethod::exact_eval: return "exact_eval";
    case SolveMethod::menu_search: return "menu_search";
  }
  return "unknown";
}

inline std::optional<SolveMethod> solve_method_from_string(std::string_view s) {
  for (auto m : {SolveMethod::normal_fptas, SolveMethod::discrete_exact, SolveMethod::grid_oracle,
                 SolveMethod::risk_grid, SolveMethod::exact_eval, SolveMethod::menu_search}) {
    if (to_string(m) == s) return m;
  }
  return std::nullopt;
}

struct SolveReport {
  Division division;
  double pile1_probability = 0.0;
  double divider_utility = 0.0;
  std::optional<double> chooser_utility;
  double baseline_divider = 0.0;
  SolveMethod method = SolveMethod::exact_eval;
  /// Additive optimality bound; unset when the report is a plain evaluation.
  std::optional<double> gap_bound;
  /// Subproblems solved (sweep steps, subsets, or grid points).
  std::uint64_t iterations = 0;
  /// Monte-Carlo standard error of pile1_probability, when it was estimated.
  std::optional<double> pile1_probability_stderr;
  std::string notes;
};

inline std::vector<double> q_of_p(const Division& d) { return d.q(); }

inline Division p_of_q(std::span<const double> q) {
  std::vector<double> p(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (!(q[i] >= -1.0 && q[i] <= 1.0)) throw DomainError("q component outside [-1,1]");
    p[i] = q[i] / 2.0 + 0.5;
  }
  return Division(std::move(p));
}

inline double baseline_divider(std::span<const double> divider_values) {
  return 0.5 * std::accumulate(divider_values.begin(), divider_values.end(), 0.0);
}

inline double baseline_divider(const Instance& instance) { return baseline_divider(instance.divider_values); }

inline double abs_sum(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DomainError("length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// E[u^D] = sum g_i / 2 + (1/2 - P) * sum q_i g_i.
inline double expected_divider_utility(std::span<const double> divider_values, std::span<const double> q,
                                       double pile1_probability) {
  if (divider_values.size() != q.size()) throw DomainError("divider values and q differ in length");
  return baseline_divider(divider_values) + (0.5 - pile1_probability) * dot(q, divider_values);
}

/// Divider's value of pile 1 and pile 2.
inline std::pair<double, double> pile_values(std::span<const double> values, const Division& d) {
  if (values.size() != d.size()) throw DomainError("values and division differ in length");
  double v1 = 0.0, v2 = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    v1 += d[i] * values[i];
    v2 += (1.0 - d[i]) * values[i];
  }
  return {v1, v2};
}

inline Division reflect(const Division& d) {
  std::vector<double> p(d.p().begin(), d.p().end());
  for (double& v : p) v = 1.0 - v;
  return Division(std::move(p));
}

/// Renames the piles so that the divider weakly prefers pile 1.
inline Division canonicalize(const Division& d, std::span<const double> divider_values) {
  const auto q = d.q();
  if (dot(q, divider_values) < 0.0) return reflect(d);
  return d;
}

/// Rescales q so its largest-magnitude component (lowest index on ties) is +-1.
inline std::vector<double> scale_to_extreme(std::span<const double> q) {
  std::size_t arg = 0;
  double best = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (std::abs(q[i]) > best) {
      best = std::abs(q[i]);
      arg = i;
    }
  }
  if (best == 0.0) throw DomainError("cannot scale the zero division");
  std::vector<double> out(q.begin(), q.end());
  for (double& v : out) v /= best;
  out[arg] = q[arg] > 0 ? 1.0 : -1.0;
  for (double& v : out) v = std::clamp(v, -1.0, 1.0);
  return out;
}

}  // namespace dnc
