#pragma once

// Brute-force ground truth: exact evaluation of a fixed division and an
// exhaustive grid search over q in [-1,1]^n.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "dnc/candidate.hpp"
#include "dnc/errors.hpp"
#include "dnc/model.hpp"
#include "dnc/parallel.hpp"
#include "dnc/priors.hpp"

namespace dnc {

inline constexpr std::uint64_t kGridPointCap = 100'000'000;
inline constexpr std::size_t kGridMaxGoods = 4;

inline SolveReport exact_eval(const Instance& instance, const Division& division, const MonteCarloOptions& mc = {}) {
  validate_instance(instance);
  if (division.size() != instance.n()) throw DomainError("division and instance differ in length");
  const auto q = division.q();
  const auto p = pile1_probability_estimate(instance.prior, q, mc);
  const auto chooser = chooser_expected_utility_estimate(instance.prior, division, mc);
  SolveReport report;
  report.division = division;
  report.pile1_probability = p.value;
  report.divider_utility = expected_divider_utility(instance.divider_values, q, p.value);
  report.chooser_utility = chooser.value;
  report.baseline_divider = baseline_divider(instance);
  report.method = SolveMethod::exact_eval;
  report.iterations = 1;
  if (p.standard_error > 0.0 || chooser.standard_error > 0.0) {
    report.pile1_probability_stderr = p.standard_error;
    report.notes = "monte-carlo samples=" + std::to_string(mc.samples) +
                   " chooser_stderr=" + std::to_string(chooser.standard_error);
  }
  return report;
}

/// Uniform grid over [-1,1]^n with K = round(2 / resolution) cells per axis.
struct QGrid {
  std::size_t n = 0;
  std::uint64_t per_axis = 0;  // K + 1 points per axis
  std::uint64_t total = 0;

  QGrid(std::size_t goods, double resolution, std::uint64_t cap = kGridPointCap) : n(goods) {
    if (!(resolution > 0.0 && resolution <= 2.0)) throw DomainError("grid resolution must lie in (0, 2]");
    const double k = std::round(2.0 / resolution);
    per_axis = static_cast<std::uint64_t>(k) + 1;
    const double points = std::pow(static_cast<double>(per_axis), static_cast<double>(n));
    if (points > static_cast<double>(cap)) {
      throw CapacityError("grid of " + std::to_string(points) + " points exceeds the cap", cap);
    }
    total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= per_axis;
  }

  double step() const { return 2.0 / static_cast<double>(per_axis - 1); }

  double coordinate(std::uint64_t k) const {
    // Exact at both ends and at the center.
    const auto km = static_cast<std::int64_t>(per_axis - 1);
    const auto ki = static_cast<std::int64_t>(k);
    return static_cast<double>(2 * ki - km) / static_cast<double>(km);
  }

  void point(std::uint64_t index, std::vector<double>& q) const {
    q.resize(n);
    for (std::size_t i = n; i-- > 0;) {
      q[i] = coordinate(index % per_axis);
      index /= per_axis;
    }
  }
};

/// Exhaustive maximization of score(q) over the grid. score returns the value
/// and the exact P of q. Reduction order is the Candidate total order.
inline Candidate grid_maximize(const QGrid& grid,
                               const std::function<std::pair<double, double>(std::span<const double>)>& score) {
  const unsigned threads = thread_count();
  const std::size_t chunks = std::min<std::uint64_t>(grid.total, threads);
  std::vector<Candidate> chunk_best(chunks);
  parallel_ranges(
      chunks,
      [&](std::size_t cb, std::size_t ce) {
        std::vector<double> q;
        for (std::size_t ch = cb; ch < ce; ++ch) {
          const std::uint64_t begin = grid.total * ch / chunks, end = grid.total * (ch + 1) / chunks;
          Candidate& best = chunk_best[ch];
          for (std::uint64_t idx = begin; idx < end; ++idx) {
            grid.point(idx, q);
            const auto [value, prob] = score(q);
            if (!best.valid || value > best.utility ||
                (value == best.utility && (prob < best.pile1_probability ||
                                           (prob == best.pile1_probability && q < best.q)))) {
              best.utility = value;
              best.pile1_probability = prob;
              best.q = q;
              best.valid = true;
            }
          }
        }
      },
      threads);
  Candidate best;
  for (auto& c : chunk_best) keep_better(best, std::move(c));
  return best;
}

inline void check_grid_prior(const Instance& instance) {
  if (instance.n() > kGridMaxGoods) throw CapacityError("grid search supports at most 4 goods", kGridMaxGoods);
  if (std::holds_alternative<Uniform01Prior>(instance.prior) && instance.n() > 2) {
    throw CapacityError("grid search over a uniform prior needs the closed form (n <= 2)", 2);
  }
}

/// Grid bound for a resolution: the linear term n (res/2) max|g| covers moving
/// q to the nearest grid point at fixed P; the same amount again is allowed
/// for the change in P that move causes.
inline double grid_gap_bound(std::span<const double> g, double resolution) {
  double gmax = 0.0;
  for (double v : g) gmax = std::max(gmax, std::abs(v));
  return 2.0 * static_cast<double>(g.size()) * (resolution / 2.0) * gmax;
}

inline SolveReport grid_best_response(const Instance& instance, double resolution) {
  validate_instance(instance);
  check_grid_prior(instance);
  const QGrid grid(instance.n(), resolution);
  const auto& g = instance.divider_values;
  const auto best = grid_maximize(grid, [&](std::span<const double> q) {
    const double P = pile1_probability(instance.prior, q);
    return std::pair{expected_divider_utility(g, q, P), P};
  });
  SolveReport report = exact_eval(instance, p_of_q(best.q));
  report.method = SolveMethod::grid_oracle;
  report.gap_bound = grid_gap_bound(g, grid.step());
  report.iterations = grid.total;
  report.notes = "grid points=" + std::to_string(grid.total) +
                 "; gap_bound = n*(h/2)*max|g| plus an equal allowance for the induced change in P";
  return report;
}

}  // namespace dnc
