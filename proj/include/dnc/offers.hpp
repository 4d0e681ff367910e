#pragma once

// Divide-and-choose with multiple offers. Besides piles 1 and 2 of the base
// division, the divider lists alternatives a in [0,1]^n; choosing a gives the
// divider the fractions a and the chooser 1 - a.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "dnc/candidate.hpp"
#include "dnc/errors.hpp"
#include "dnc/model.hpp"
#include "dnc/priors.hpp"
#include "dnc/simplex.hpp"

namespace dnc {

struct OfferMenu {
  Division base;
  std::vector<std::vector<double>> alternatives;  // divider-side fractions

  void validate() const {
    for (const auto& a : alternatives) {
      if (a.size() != base.size()) throw DomainError("alternative has the wrong number of goods");
      for (double v : a) {
        if (!(v >= 0.0 && v <= 1.0)) throw DomainError("alternative fraction outside [0,1]");
      }
    }
  }
};

struct MenuOption {
  enum class Kind { pile1, pile2, alternative };
  Kind kind = Kind::pile2;
  std::size_t index = 0;  // alternative index

  friend bool operator==(const MenuOption&, const MenuOption&) = default;

  std::string to_string() const {
    switch (kind) {
      case Kind::pile1: return "pile1";
      case Kind::pile2: return "pile2";
      case Kind::alternative: return "alt(" + std::to_string(index) + ")";
    }
    return "?";
  }
};

namespace detail {

/// Options in the fixed tie order pile2 < alt(0) < alt(1) < ... < pile1, each
/// with the divider-side fraction vector it implies.
inline std::vector<std::pair<MenuOption, std::vector<double>>> menu_options(const OfferMenu& menu) {
  std::vector<std::pair<MenuOption, std::vector<double>>> out;
  std::vector<double> p(menu.base.p().begin(), menu.base.p().end());
  out.push_back({{MenuOption::Kind::pile2, 0}, p});  // divider keeps pile 1
  for (std::size_t k = 0; k < menu.alternatives.size(); ++k) {
    out.push_back({{MenuOption::Kind::alternative, k}, menu.alternatives[k]});
  }
  std::vector<double> rest(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) rest[i] = 1.0 - p[i];
  out.push_back({{MenuOption::Kind::pile1, 0}, rest});
  return out;
}

inline double weighted(std::span<const double> frac, std::span<const double> values, bool complement) {
  double s = 0.0;
  for (std::size_t i = 0; i < frac.size(); ++i) s += (complement ? 1.0 - frac[i] : frac[i]) * values[i];
  return s;
}

inline double pair_scale(std::span<const double> a, std::span<const double> b, std::span<const double> values) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]) * std::abs(values[i]);
  return s;
}

}  // namespace detail

/// The chooser's pick: highest own value; near-ties (relative kTieTolerance)
/// go to the option the divider likes best, then to the fixed order
/// pile2 < alt(k ascending) < pile1. Without divider values the divider
/// tie-break is skipped.
inline MenuOption chooser_best_option(const OfferMenu& menu, std::span<const double> chooser_values,
                                      std::span<const double> divider_values = {}) {
  menu.validate();
  if (chooser_values.size() != menu.base.size()) throw DomainError("chooser values have the wrong length");
  const bool use_divider = !divider_values.empty();
  if (use_divider && divider_values.size() != menu.base.size()) throw DomainError("divider values have the wrong length");
  const auto options = detail::menu_options(menu);

  std::size_t top = 0;
  double top_value = detail::weighted(options[0].second, chooser_values, true);
  for (std::size_t k = 1; k < options.size(); ++k) {
    const double v = detail::weighted(options[k].second, chooser_values, true);
    if (v - top_value > kTieTolerance * detail::pair_scale(options[k].second, options[top].second, chooser_values)) {
      top = k;
      top_value = v;
    }
  }
  if (!use_divider) return options[top].first;

  std::size_t pick = top;
  double pick_divider = detail::weighted(options[top].second, divider_values, false);
  for (std::size_t k = 0; k < options.size(); ++k) {
    if (k == top) continue;
    const double v = detail::weighted(options[k].second, chooser_values, true);
    if (std::abs(v - top_value) > kTieTolerance * detail::pair_scale(options[k].second, options[top].second, chooser_values)) {
      continue;
    }
    const double dv = detail::weighted(options[k].second, divider_values, false);
    const double tol = kTieTolerance * detail::pair_scale(options[k].second, options[pick].second, divider_values);
    if (dv - pick_divider > tol || (std::abs(dv - pick_divider) <= tol && k < pick)) {
      pick = k;
      pick_divider = dv;
    }
  }
  return options[pick].first;
}

struct MenuValue {
  double divider = 0.0;
  double chooser = 0.0;
  double pile1_probability = 0.0;
};

inline MenuValue eval_menu(const OfferMenu& menu, std::span<const double> divider_values,
                           const JointDiscretePrior& prior) {
  menu.validate();
  validate_prior(prior);
  if (divider_values.size() != menu.base.size() || prior.types.front().values.size() != menu.base.size()) {
    throw DomainError("menu, divider values and prior differ in length");
  }
  const auto options = detail::menu_options(menu);
  MenuValue out;
  for (const auto& t : prior.types) {
    const auto pick = chooser_best_option(menu, t.values, divider_values);
    std::span<const double> frac;
    for (const auto& [opt, f] : options) {
      if (opt == pick) frac = f;
    }
    out.divider += t.prob * detail::weighted(frac, divider_values, false);
    out.chooser += t.prob * detail::weighted(frac, t.values, true);
    if (pick.kind == MenuOption::Kind::pile1) out.pile1_probability += t.prob;
  }
  return out;
}

inline constexpr std::size_t kMenuMaxTypes = 8;
inline constexpr std::size_t kMenuMaxGoods = 6;

namespace detail {

/// Calls fn(block) for every set partition of {0..m-1} as a restricted growth
/// string (block[0] = 0, block[i] <= 1 + max of earlier blocks).
inline void for_each_set_partition(std::size_t m, const std::function<void(const std::vector<std::size_t>&)>& fn) {
  std::vector<std::size_t> block(m, 0), prefix_max(m, 0);
  for (;;) {
    fn(block);
    if (m < 2) return;
    std::size_t i = m - 1;
    while (i >= 1 && block[i] > prefix_max[i - 1]) --i;
    if (i == 0) return;
    ++block[i];
    prefix_max[i] = std::max(prefix_max[i - 1], block[i]);
    for (std::size_t j = i + 1; j < m; ++j) {
      block[j] = 0;
      prefix_max[j] = prefix_max[i];
    }
  }
}

}  // namespace detail

/// Optimal menu with an even base division. Types are partitioned into the
/// group that takes the even split and groups sharing one alternative; each
/// partition is an LP over the alternatives with incentive constraints.
inline std::pair<OfferMenu, SolveReport> solve_multiple_offers(std::span<const double> divider_values,
                                                               const JointDiscretePrior& prior) {
  validate_divider_values(divider_values);
  validate_prior(prior);
  const std::size_t n = divider_values.size();
  const std::size_t types = prior.types.size();
  if (prior.types.front().values.size() != n) throw DomainError("prior describes a different number of goods");
  if (types > kMenuMaxTypes) throw CapacityError("menu search supports at most 8 chooser types", kMenuMaxTypes);
  if (n > kMenuMaxGoods) throw CapacityError("menu search supports at most 6 goods", kMenuMaxGoods);

  const std::vector<double> g(divider_values.begin(), divider_values.end());
  const Division even = Division::even(n);
  std::vector<double> half_total(types);
  for (std::size_t j = 0; j < types; ++j) {
    double s = 0.0;
    for (double v : prior.types[j].values) s += v;
    half_total[j] = 0.5 * s;
  }

  OfferMenu best_menu{even, {}};
  MenuValue best_value = eval_menu(best_menu, g, prior);
  std::uint64_t lps = 0;

  // Element 0 marks the even-split group; elements 1..types are the types.
  detail::for_each_set_partition(types + 1, [&](const std::vector<std::size_t>& block) {
    std::size_t groups = 0;
    for (std::size_t j = 1; j <= types; ++j) groups = std::max(groups, block[j]);
    if (groups == 0) return;
    // Alternative k (1..groups) occupies variables (k-1)*n .. k*n-1.
    const std::size_t vars = groups * n;
    LinearProgram lp;
    lp.objective.assign(vars, 0.0);
    lp.lower.assign(vars, 0.0);
    lp.upper.assign(vars, 1.0);
    bool empty_group = false;
    for (std::size_t k = 1; k <= groups; ++k) {
      bool any = false;
      for (std::size_t j = 1; j <= types; ++j) any = any || block[j] == k;
      empty_group = empty_group || !any;
    }
    if (empty_group) return;
    for (std::size_t j = 1; j <= types; ++j) {
      const auto& x = prior.types[j - 1].values;
      const std::size_t k = block[j];
      if (k > 0) {
        for (std::size_t i = 0; i < n; ++i) lp.objective[(k - 1) * n + i] += prior.types[j - 1].prob * g[i];
        // Chooser value of a_k is sum x - a_k.x; it must beat the even split ...
        std::vector<double> row(vars, 0.0);
        for (std::size_t i = 0; i < n; ++i) row[(k - 1) * n + i] = x[i];
        lp.add_row(row, half_total[j - 1]);
        // ... and every other alternative.
        for (std::size_t l = 1; l <= groups; ++l) {
          if (l == k) continue;
          std::vector<double> r2(vars, 0.0);
          for (std::size_t i = 0; i < n; ++i) {
            r2[(k - 1) * n + i] = x[i];
            r2[(l - 1) * n + i] = -x[i];
          }
          lp.add_row(std::move(r2), 0.0);
        }
      } else {
        // Even-split types must not prefer any alternative.
        for (std::size_t l = 1; l <= groups; ++l) {
          std::vector<double> row(vars, 0.0);
          for (std::size_t i = 0; i < n; ++i) row[(l - 1) * n + i] = -x[i];
          lp.add_row(std::move(row), -half_total[j - 1]);
        }
      }
    }
    const auto sol = solve_lp(lp);
    ++lps;
    if (sol.status != LpStatus::optimal) return;
    OfferMenu menu{even, {}};
    for (std::size_t k = 0; k < groups; ++k) {
      std::vector<double> a(sol.x.begin() + static_cast<std::ptrdiff_t>(k * n),
                            sol.x.begin() + static_cast<std::ptrdiff_t>((k + 1) * n));
      for (double& v : a) v = std::clamp(v, 0.0, 1.0);
      menu.alternatives.push_back(std::move(a));
    }
    const auto value = eval_menu(menu, g, prior);
    if (value.divider > best_value.divider + 1e-12 * abs_sum(g)) {
      best_value = value;
      best_menu = std::move(menu);
    }
  });

  SolveReport report;
  report.division = even;
  report.pile1_probability = best_value.pile1_probability;
  report.divider_utility = best_value.divider;
  report.chooser_utility = best_value.chooser;
  report.baseline_divider = baseline_divider(g);
  report.method = SolveMethod::menu_search;
  report.gap_bound = 0.0;
  report.iterations = lps;
  report.notes = "alternatives=" + std::to_string(best_menu.alternatives.size()) + " lps=" + std::to_string(lps);
  return {std::move(best_menu), std::move(report)};
}

}  // namespace dnc
