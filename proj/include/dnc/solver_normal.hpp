#pragma once

// Approximately optimal divisions for independent normal chooser priors.
//
// For a target pile-1 probability P the divider solves
//
//   C_P:  maximize  sum g/2 + (1/2 - P) g.q
//         over      q in [-1,1]^n,  g.q >= 0,  mu.q + kappa ||sigma o q|| <= 0,
//
// with kappa = -Phi^{-1}(P). The last constraint says the chooser takes pile 1
// with probability at most P. Sweeping P from 1/2 downward in steps of
// delta = gamma / sum|g| and keeping the best exact utility gives a division
// within gamma (plus the subproblem tolerance) of optimal.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dnc/candidate.hpp"
#include "dnc/cone_program.hpp"
#include "dnc/errors.hpp"
#include "dnc/model.hpp"
#include "dnc/normal_dist.hpp"
#include "dnc/parallel.hpp"
#include "dnc/priors.hpp"
#include "dnc/simplex.hpp"

namespace dnc {

struct NormalSolveConfig {
  double gamma = 0.0;
  /// Objective tolerance for each C_P; 0 selects 1e-8 * sum|g|.
  double subproblem_tolerance = 0.0;
  std::uint64_t max_sweep_steps = 10'000'000;
};

struct CpResult {
  double value = 0.0;  // u_P
  std::vector<double> q;
  std::uint64_t newton_steps = 0;
  /// The cone had no strictly feasible point in the box, so the value is the
  /// optimum of the linear relaxation mu.q <= 0 (an upper bound).
  bool relaxed = false;
};

inline double default_subproblem_tolerance(std::span<const double> g) { return 1e-8 * abs_sum(g); }

namespace detail {

struct NormalParams {
  std::vector<double> mu, sigma;
};

inline NormalParams normal_params(const NormalPrior& prior) {
  NormalParams out;
  for (const auto& g : prior.goods) {
    out.mu.push_back(g.mean);
    out.sigma.push_back(g.stdev);
  }
  return out;
}

inline bool box_contains_zero(std::span<const double> lower, std::span<const double> upper) {
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (lower[i] > 0.0 || upper[i] < 0.0) return false;
  }
  return true;
}

/// max c.q over the box with mu.q <= 0.
inline std::optional<CpResult> cp_linear_relaxation(std::span<const double> c, std::span<const double> mu,
                                                    std::span<const double> lower, std::span<const double> upper,
                                                    double base) {
  LinearProgram lp;
  lp.objective.assign(c.begin(), c.end());
  lp.lower.assign(lower.begin(), lower.end());
  lp.upper.assign(upper.begin(), upper.end());
  lp.add_row(std::vector<double>(mu.begin(), mu.end()), 0.0);
  const auto sol = solve_lp(lp);
  if (sol.status != LpStatus::optimal) return std::nullopt;
  CpResult out;
  out.q = sol.x;
  out.value = base + sol.value;
  return out;
}

}  // namespace detail

/// Solves C_P over an arbitrary sub-box [lower, upper] of [-1,1]^n. Returns
/// nullopt when the box misses the cone entirely.
inline std::optional<CpResult> solve_cp_boxed(std::span<const double> g, std::span<const double> mu,
                                              std::span<const double> sigma, double P, std::span<const double> lower,
                                              std::span<const double> upper, double tolerance) {
  const std::size_t n = g.size();
  if (mu.size() != n || sigma.size() != n || lower.size() != n || upper.size() != n) {
    throw DomainError("solve_cp: dimension mismatch");
  }
  validate_divider_values(g);
  for (double s : sigma) {
    if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("solve_cp: stdevs must be positive");
  }
  if (!(P > 0.0 && P <= 0.5)) throw DomainError("solve_cp: P must lie in (0, 1/2]");
  if (!(tolerance > 0.0)) throw DomainError("solve_cp: tolerance must be positive");
  for (std::size_t i = 0; i < n; ++i) {
    if (lower[i] < -1.0 || upper[i] > 1.0) throw DomainError("solve_cp: box must lie inside [-1,1]");
    if (lower[i] > upper[i]) return std::nullopt;
  }

  const double base = baseline_divider(g);
  std::vector<double> c(n);
  for (std::size_t i = 0; i < n; ++i) c[i] = (0.5 - P) * g[i];
  const bool zero_ok = detail::box_contains_zero(lower, upper);

  auto finish = [&](CpResult r) {
    if (zero_ok && !r.relaxed && dot(c, r.q) < 0.0) {
      r.q.assign(n, 0.0);
      r.value = base;
    }
    return r;
  };

  if (P == 0.5) {
    // Objective is constant; the cone is the halfspace mu.q <= 0.
    if (zero_ok) return CpResult{base, std::vector<double>(n, 0.0), 0, false};
    auto r = detail::cp_linear_relaxation(c, mu, lower, upper, base);
    return r;
  }

  const double kappa = -std_normal_quantile(P);
  double ratio_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) ratio_sq += (mu[i] / sigma[i]) * (mu[i] / sigma[i]);
  const double ratio = std::sqrt(ratio_sq);

  if (ratio <= kappa * (1.0 + 1e-10)) {
    // The cone has empty interior: the origin, plus the ray along -mu/sigma^2
    // in the boundary case ratio == kappa.
    std::optional<CpResult> best;
    if (zero_ok) best = CpResult{base, std::vector<double>(n, 0.0), 0, false};
    if (ratio > 0.0 && ratio >= kappa * (1.0 - 1e-10)) {
      std::vector<double> d(n);
      for (std::size_t i = 0; i < n; ++i) d[i] = -mu[i] / (sigma[i] * sigma[i]);
      double t_lo = 0.0, t_hi = std::numeric_limits<double>::infinity();
      bool ok = true;
      for (std::size_t i = 0; i < n && ok; ++i) {
        if (d[i] == 0.0) {
          ok = lower[i] <= 0.0 && upper[i] >= 0.0;
        } else {
          const double a = lower[i] / d[i], b = upper[i] / d[i];
          t_lo = std::max(t_lo, std::min(a, b));
          t_hi = std::min(t_hi, std::max(a, b));
        }
      }
      if (ok && t_lo <= t_hi) {
        const double slope = dot(c, d);
        const double t = slope > 0.0 ? t_hi : t_lo;
        CpResult r;
        r.q.resize(n);
        for (std::size_t i = 0; i < n; ++i) r.q[i] = std::clamp(t * d[i], lower[i], upper[i]);
        r.value = base + dot(c, r.q);
        if (!best || r.value > best->value) best = r;
      }
    }
    if (best) return finish(*best);
    return std::nullopt;
  }

  // Strictly feasible start: along the cone axis if the box straddles the
  // origin, otherwise from a phase-one search.
  std::vector<double> start(n);
  std::uint64_t steps = 0;
  bool strict_straddle = true;
  for (std::size_t i = 0; i < n; ++i) strict_straddle = strict_straddle && lower[i] < 0.0 && upper[i] > 0.0;
  if (strict_straddle) {
    double t = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      const double d = -mu[i] / (sigma[i] * sigma[i]);
      if (d > 0.0) t = std::min(t, upper[i] / d);
      if (d < 0.0) t = std::min(t, lower[i] / d);
    }
    for (std::size_t i = 0; i < n; ++i) start[i] = 0.5 * t * (-mu[i] / (sigma[i] * sigma[i]));
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      if (!(upper[i] - lower[i] > 1e-12)) {
        auto r = detail::cp_linear_relaxation(c, mu, lower, upper, base);
        if (r) r->relaxed = true;
        return r;
      }
    }
    // Variables (q, s): maximize s subject to mu.q + kappa ||sigma o q|| + s <= 0.
    ConeBoxProgram phase1;
    phase1.objective.assign(n + 1, 0.0);
    phase1.objective[n] = 1.0;
    phase1.lower.assign(lower.begin(), lower.end());
    phase1.upper.assign(upper.begin(), upper.end());
    std::vector<double> z0(n + 1);
    double lin = 0.0, nrm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      z0[i] = 0.5 * (lower[i] + upper[i]);
      phase1.axis.push_back(-mu[i] / kappa);
      phase1.scale.push_back(sigma[i]);
      lin += mu[i] * z0[i];
      nrm += sigma[i] * z0[i] * sigma[i] * z0[i];
    }
    z0[n] = -lin - kappa * std::sqrt(nrm) - 1.0;
    phase1.axis.push_back(-1.0 / kappa);
    phase1.scale.push_back(0.0);
    phase1.lower.push_back(z0[n] - 1.0);
    phase1.upper.push_back(std::numeric_limits<double>::infinity());
    double mu_scale = kappa * std::accumulate(sigma.begin(), sigma.end(), 0.0);
    for (double m : mu) mu_scale += std::abs(m);
    BarrierOptions opts;
    opts.gap_tolerance = 1e-9 * mu_scale;
    BarrierResult r1;
    try {
      r1 = maximize_cone_box(phase1, z0, opts, [n](std::span<const double> z) { return z[n] > 0.0; });
    } catch (const SolverError&) {
      auto r = detail::cp_linear_relaxation(c, mu, lower, upper, base);
      if (r) r->relaxed = true;
      return r;
    }
    steps += r1.newton_steps;
    if (!r1.stopped_early) {
      if (r1.z[n] + opts.gap_tolerance < 0.0) return std::nullopt;
      auto r = detail::cp_linear_relaxation(c, mu, lower, upper, base);
      if (r) {
        r->relaxed = true;
        r->newton_steps = steps;
      }
      return r;
    }
    std::copy(r1.z.begin(), r1.z.begin() + static_cast<std::ptrdiff_t>(n), start.begin());
  }

  ConeBoxProgram prog;
  prog.objective = c;
  prog.lower.assign(lower.begin(), lower.end());
  prog.upper.assign(upper.begin(), upper.end());
  for (std::size_t i = 0; i < n; ++i) {
    prog.axis.push_back(-mu[i] / kappa);
    prog.scale.push_back(sigma[i]);
  }
  BarrierOptions opts;
  opts.gap_tolerance = tolerance;
  const auto r = maximize_cone_box(prog, start, opts);
  CpResult out;
  out.q = r.z;
  for (std::size_t i = 0; i < n; ++i) out.q[i] = std::clamp(out.q[i], lower[i], upper[i]);
  out.value = base + dot(c, out.q);
  out.newton_steps = steps + r.newton_steps;
  return finish(std::move(out));
}

/// C_P over the full box; always feasible because q = 0 is.
inline std::pair<double, std::vector<double>> solve_cp(std::span<const double> g, std::span<const double> mu,
                                                       std::span<const double> sigma, double P,
                                                       double tolerance = 0.0) {
  if (tolerance == 0.0) tolerance = default_subproblem_tolerance(g);
  const std::vector<double> lo(g.size(), -1.0), hi(g.size(), 1.0);
  auto r = solve_cp_boxed(g, mu, sigma, P, lo, hi, tolerance);
  if (!r) throw SolverError("solve_cp: full box reported infeasible", std::vector<double>(g.size(), 0.0));
  return {r->value, std::move(r->q)};
}

/// Number of sweep values P = 1/2 - k delta with P > 0.
inline std::uint64_t sweep_step_count(double delta) {
  return static_cast<std::uint64_t>(std::ceil(0.5 / delta));
}

namespace detail {

inline double sweep_value(std::uint64_t k, double delta) { return 0.5 - static_cast<double>(k) * delta; }

inline std::uint64_t checked_steps(std::span<const double> g, const NormalSolveConfig& config, double& delta) {
  if (!(config.gamma > 0.0) || !std::isfinite(config.gamma)) throw DomainError("gamma must be positive");
  delta = config.gamma / abs_sum(g);
  const double raw = std::ceil(0.5 / delta);
  if (raw > static_cast<double>(config.max_sweep_steps)) {
    throw CapacityError("sweep would exceed max_sweep_steps; increase gamma", config.max_sweep_steps);
  }
  std::uint64_t steps = sweep_step_count(delta);
  while (steps > 0 && !(sweep_value(steps - 1, delta) > 0.0)) --steps;
  return steps;
}

}  // namespace detail

inline SolveReport solve_normal(const Instance& instance, const NormalSolveConfig& config) {
  validate_instance(instance);
  const auto* prior = std::get_if<NormalPrior>(&instance.prior);
  if (!prior) throw DomainError("solve_normal requires a normal prior");
  const auto& g = instance.divider_values;
  const auto params = detail::normal_params(*prior);
  const double tol = config.subproblem_tolerance > 0.0 ? config.subproblem_tolerance : default_subproblem_tolerance(g);
  double delta = 0.0;
  const std::uint64_t steps = detail::checked_steps(g, config, delta);

  auto evaluate = [&](std::vector<double> q, double P_grid) {
    Candidate c;
    c.pile1_probability = pile1_probability(instance.prior, q);
    c.utility = expected_divider_utility(g, q, c.pile1_probability);
    c.q = std::move(q);
    c.P_grid = P_grid;
    c.valid = true;
    return c;
  };

  Candidate best = evaluate(std::vector<double>(g.size(), 0.0), 0.0);
  const unsigned threads = thread_count();
  const std::size_t chunks = std::min<std::size_t>(std::max<std::size_t>(steps, 1), threads);
  std::vector<Candidate> chunk_best(chunks);
  parallel_ranges(
      chunks,
      [&](std::size_t cb, std::size_t ce) {
        for (std::size_t ch = cb; ch < ce; ++ch) {
          const std::uint64_t begin = steps * ch / chunks, end = steps * (ch + 1) / chunks;
          for (std::uint64_t k = begin; k < end; ++k) {
            const double P = detail::sweep_value(k, delta);
            auto [u, q] = solve_cp(g, params.mu, params.sigma, P, tol);
            keep_better(chunk_best[ch], evaluate(std::move(q), P));
          }
        }
      },
      threads);
  for (auto& c : chunk_best) keep_better(best, std::move(c));

  SolveReport report;
  report.division = p_of_q(best.q);
  report.pile1_probability = best.pile1_probability;
  report.divider_utility = best.utility;
  report.chooser_utility = chooser_expected_utility(instance.prior, report.division);
  report.baseline_divider = baseline_divider(g);
  report.method = SolveMethod::normal_fptas;
  report.gap_bound = config.gamma + tol;
  report.iterations = steps;
  report.notes = "delta=" + std::to_string(delta) + " sweep_P=" + std::to_string(best.P_grid);
  return report;
}

/// Fully polynomial-time approximation: gamma = (eps / 2) * sum g, so the
/// result is within a factor (1 - eps) of optimal. Requires g >= 0.
inline SolveReport solve_normal_fptas(const Instance& instance, double eps) {
  for (double v : instance.divider_values) {
    if (v < 0.0) throw DomainError("the approximation scheme requires nonnegative divider values");
  }
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("eps must lie in (0, 1)");
  validate_divider_values(instance.divider_values);
  NormalSolveConfig config;
  config.gamma = 0.5 * eps * std::accumulate(instance.divider_values.begin(), instance.divider_values.end(), 0.0);
  return solve_normal(instance, config);
}

/// Optimal C_P objective on the grid P_k = k / (2 steps), k = 1..steps.
inline std::vector<std::pair<double, double>> sweep_p(const Instance& instance, std::uint64_t steps,
                                                      double tolerance = 0.0) {
  validate_instance(instance);
  const auto* prior = std::get_if<NormalPrior>(&instance.prior);
  if (!prior) throw DomainError("sweep_p requires a normal prior");
  if (steps == 0) throw DomainError("sweep_p needs at least one step");
  const auto params = detail::normal_params(*prior);
  const auto& g = instance.divider_values;
  if (tolerance == 0.0) tolerance = default_subproblem_tolerance(g);
  return parallel_map<std::pair<double, double>>(steps, [&](std::size_t k) {
    const double P = static_cast<double>(k + 1) / (2.0 * static_cast<double>(steps));
    return std::pair{P, solve_cp(g, params.mu, params.sigma, P, tolerance).first};
  });
}

struct SweepBound {
  /// Upper bound on the utility of any canonical division in the box; -inf
  /// when no sweep value admits a feasible point.
  double bound = -std::numeric_limits<double>::infinity();
  double max_objective = -std::numeric_limits<double>::infinity();
  std::uint64_t steps = 0;
  std::uint64_t relaxed_steps = 0;
};

/// Runs the sweep restricted to [lower, upper] and returns a sound upper bound
/// on the exact utility of every canonical division with q in the box:
/// max_k u_{P_k} + gamma + tolerance.
inline SweepBound sweep_upper_bound(const Instance& instance, double gamma, std::span<const double> lower,
                                    std::span<const double> upper, double tolerance = 0.0) {
  validate_instance(instance);
  const auto* prior = std::get_if<NormalPrior>(&instance.prior);
  if (!prior) throw DomainError("sweep bound requires a normal prior");
  const auto params = detail::normal_params(*prior);
  const auto& g = instance.divider_values;
  if (tolerance == 0.0) tolerance = default_subproblem_tolerance(g);
  NormalSolveConfig config;
  config.gamma = gamma;
  double delta = 0.0;
  const std::uint64_t steps = detail::checked_steps(g, config, delta);
  const auto results = parallel_map<std::optional<CpResult>>(steps, [&](std::size_t k) {
    return solve_cp_boxed(g, params.mu, params.sigma, detail::sweep_value(k, delta), lower, upper, tolerance);
  });
  SweepBound out;
  out.steps = steps;
  for (const auto& r : results) {
    if (!r) continue;
    out.max_objective = std::max(out.max_objective, r->value);
    out.relaxed_steps += r->relaxed ? 1 : 0;
  }
  if (std::isfinite(out.max_objective)) out.bound = out.max_objective + gamma + tolerance;
  return out;
}

struct RefinedBound {
  /// Largest bound over the final P-intervals; -inf when the box holds no
  /// division with P <= 1/2.
  double bound = -std::numeric_limits<double>::infinity();
  bool below_target = false;
  std::uint64_t subproblems = 0;
  std::uint64_t relaxed = 0;
};

/// Upper bound on the utility of every division in the box with P <= 1/2,
/// refined until it drops below `target` or the budget runs out. Starts from
/// the gamma sweep; an interval [lo, hi] of P values contributes
/// u_hi + (hi - lo) * sum|g| + tolerance and is bisected while that bound
/// reaches the target.
inline RefinedBound refined_upper_bound(const Instance& instance, double gamma, std::span<const double> lower,
                                        std::span<const double> upper, double target, double tolerance = 0.0,
                                        std::uint64_t max_subproblems = 200000) {
  validate_instance(instance);
  const auto* prior = std::get_if<NormalPrior>(&instance.prior);
  if (!prior) throw DomainError("refined bound requires a normal prior");
  const auto params = detail::normal_params(*prior);
  const auto& g = instance.divider_values;
  if (tolerance == 0.0) tolerance = default_subproblem_tolerance(g);
  const double G = abs_sum(g);
  NormalSolveConfig config;
  config.gamma = gamma;
  double delta = 0.0;
  const std::uint64_t steps = detail::checked_steps(g, config, delta);

  RefinedBound out;
  auto value_at = [&](double P) {
    const auto r = solve_cp_boxed(g, params.mu, params.sigma, P, lower, upper, tolerance);
    ++out.subproblems;
    if (!r) return -std::numeric_limits<double>::infinity();
    out.relaxed += r->relaxed ? 1 : 0;
    return r->value;
  };

  const auto coarse = parallel_map<std::optional<CpResult>>(steps, [&](std::size_t k) {
    return solve_cp_boxed(g, params.mu, params.sigma, detail::sweep_value(k, delta), lower, upper, tolerance);
  });
  out.subproblems += steps;

  struct Interval {
    double lo, hi, u_hi;
  };
  std::vector<Interval> work;
  for (std::uint64_t k = 0; k < steps; ++k) {
    const double hi = detail::sweep_value(k, delta);
    const double lo = k + 1 < steps ? detail::sweep_value(k + 1, delta) : 0.0;
    const auto& r = coarse[k];
    if (r) out.relaxed += r->relaxed ? 1 : 0;
    work.push_back({lo, hi, r ? r->value : -std::numeric_limits<double>::infinity()});
  }
  auto interval_bound = [&](const Interval& iv) {
    if (!std::isfinite(iv.u_hi)) return -std::numeric_limits<double>::infinity();
    return iv.u_hi + (iv.hi - iv.lo) * G + tolerance;
  };

  out.below_target = true;
  while (!work.empty()) {
    const Interval iv = work.back();
    work.pop_back();
    const double b = interval_bound(iv);
    if (b < target) {
      out.bound = std::max(out.bound, b);
      continue;
    }
    const double mid = 0.5 * (iv.lo + iv.hi);
    if (out.subproblems >= max_subproblems || !(mid > iv.lo && mid < iv.hi)) {
      out.bound = std::max(out.bound, b);
      out.below_target = false;
      continue;
    }
    const double u_mid = value_at(mid);
    work.push_back({mid, iv.hi, iv.u_hi});
    work.push_back({iv.lo, mid, u_mid});
  }
  return out;
}

}  // namespace dnc
