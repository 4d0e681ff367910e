#pragma once

// Exact optimal divisions for finite (possibly correlated) chooser priors.
//
// Any division induces the set S of types that take pile 1. For each S with
// mass P(S) <= 1/2 the divider solves the LP
//
//   maximize (1/2 - P(S)) g.q  over q in [-1,1]^n  with  x_j.q <= 0 for j not in S,
//
// which forces every type outside S to (weakly) prefer pile 2. The best LP
// solution, re-scored under the true chooser behavior, is optimal.

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "dnc/candidate.hpp"
#include "dnc/errors.hpp"
#include "dnc/model.hpp"
#include "dnc/parallel.hpp"
#include "dnc/priors.hpp"
#include "dnc/simplex.hpp"

namespace dnc {

struct DiscreteSolveConfig {
  std::size_t max_types = 22;
  std::size_t flatten_cap = kDefaultFlattenCap;
};

inline SolveReport solve_discrete(std::span<const double> divider_values, const JointDiscretePrior& prior,
                                  const DiscreteSolveConfig& config = {}) {
  validate_divider_values(divider_values);
  const PriorSpec spec = prior;
  validate_prior(spec);
  const std::size_t n = divider_values.size();
  if (prior.types.front().values.size() != n) throw DomainError("prior describes a different number of goods");
  const std::size_t types = prior.types.size();
  if (types > config.max_types || types >= 63) {
    throw CapacityError("too many chooser types for subset enumeration (" + std::to_string(types) +
                            "); use the grid oracle instead",
                        config.max_types);
  }

  const std::vector<double> g(divider_values.begin(), divider_values.end());
  const std::uint64_t subsets = std::uint64_t{1} << types;

  auto evaluate = [&](std::vector<double> q, double mass) {
    Candidate c;
    c.pile1_probability = pile1_probability(spec, q);
    c.utility = expected_divider_utility(g, q, c.pile1_probability);
    c.q = std::move(q);
    c.P_grid = mass;
    c.valid = true;
    return c;
  };

  const unsigned threads = thread_count();
  const std::size_t chunks = std::min<std::uint64_t>(subsets, threads);
  std::vector<Candidate> chunk_best(chunks);
  std::vector<std::uint64_t> chunk_lps(chunks, 0);
  parallel_ranges(
      chunks,
      [&](std::size_t cb, std::size_t ce) {
        for (std::size_t ch = cb; ch < ce; ++ch) {
          const std::uint64_t begin = subsets * ch / chunks, end = subsets * (ch + 1) / chunks;
          for (std::uint64_t mask = begin; mask < end; ++mask) {
            double mass = 0.0;
            for (std::size_t j = 0; j < types; ++j) {
              if (mask >> j & 1U) mass += prior.types[j].prob;
            }
            if (mass > 0.5 + 1e-12) continue;
            LinearProgram lp;
            lp.objective.resize(n);
            for (std::size_t i = 0; i < n; ++i) lp.objective[i] = (0.5 - mass) * g[i];
            lp.lower.assign(n, -1.0);
            lp.upper.assign(n, 1.0);
            for (std::size_t j = 0; j < types; ++j) {
              if (!(mask >> j & 1U)) lp.add_row(prior.types[j].values, 0.0);
            }
            const auto sol = solve_lp(lp);
            ++chunk_lps[ch];
            if (sol.status != LpStatus::optimal) continue;  // q = 0 is always feasible
            keep_better(chunk_best[ch], evaluate(sol.x, mass));
          }
        }
      },
      threads);

  Candidate best = evaluate(std::vector<double>(n, 0.0), 0.0);
  std::uint64_t lps = 0;
  for (std::size_t ch = 0; ch < chunks; ++ch) {
    keep_better(best, std::move(chunk_best[ch]));
    lps += chunk_lps[ch];
  }

  SolveReport report;
  report.division = canonicalize(p_of_q(best.q), g);
  const auto q = report.division.q();
  report.pile1_probability = pile1_probability(spec, q);
  report.divider_utility = expected_divider_utility(g, q, report.pile1_probability);
  report.chooser_utility = chooser_expected_utility(spec, report.division);
  report.baseline_divider = baseline_divider(g);
  report.method = SolveMethod::discrete_exact;
  report.gap_bound = 0.0;
  report.iterations = lps;
  report.notes = "subsets=" + std::to_string(subsets) + " lps=" + std::to_string(lps);
  return report;
}

/// Flattens a per-good prior when necessary and runs the subset enumeration.
inline SolveReport solve_discrete(const Instance& instance, const DiscreteSolveConfig& config = {}) {
  validate_instance(instance);
  if (const auto* joint = std::get_if<JointDiscretePrior>(&instance.prior)) {
    return solve_discrete(instance.divider_values, *joint, config);
  }
  if (const auto* per_good = std::get_if<DiscretePerGoodPrior>(&instance.prior)) {
    return solve_discrete(instance.divider_values, flatten_to_joint(*per_good, config.flatten_cap), config);
  }
  throw DomainError("solve_discrete requires a discrete prior");
}

}  // namespace dnc
