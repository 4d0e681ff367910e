#pragma once

// Seeded Monte-Carlo welfare experiments. Every trial draws from its own
// (seed, trial) random stream and results are aggregated in trial order, so a
// configuration reproduces bit-for-bit at any thread count.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "dnc/errors.hpp"
#include "dnc/model.hpp"
#include "dnc/oracle.hpp"
#include "dnc/parallel.hpp"
#include "dnc/priors.hpp"
#include "dnc/risk.hpp"
#include "dnc/rng.hpp"
#include "dnc/solver_normal.hpp"

namespace dnc {

enum class PriorFamily { normal, uniform01 };

struct ExperimentConfig {
  std::uint64_t seed = 1;
  std::size_t trials = 100;
  std::vector<std::size_t> n_values{2};
  PriorFamily family = PriorFamily::normal;
  double mean = 1.0;   // normal family
  double stdev = 0.2;  // normal family
  /// Inner solves use gamma = gamma_rel * sum|g|.
  double gamma_rel = 0.01;
  /// Monte-Carlo samples per expectation where no closed form exists.
  std::size_t mc_samples = 100000;
  /// Optimal divisions per chooser-side ensemble (deviation study).
  std::size_t ensemble = 500;
  /// Grid resolution for grid-based inner solves.
  double resolution = 0.05;
  RiskProfile risk = RiskProfile::sqrt_shifted(0.0);

  void validate() const {
    if (trials < 1) throw DomainError("trials must be at least 1");
    if (n_values.empty()) throw DomainError("n_values must not be empty");
    for (auto n : n_values) {
      if (n < 1) throw DomainError("every n must be at least 1");
    }
    if (family == PriorFamily::normal && !(stdev > 0.0)) throw DomainError("normal stdev must be positive");
    if (!(gamma_rel > 0.0)) throw DomainError("gamma_rel must be positive");
    if (mc_samples < 1 || ensemble < 1) throw DomainError("sample counts must be positive");
  }
};

inline PriorSpec family_prior(const ExperimentConfig& config, std::size_t n) {
  if (config.family == PriorFamily::uniform01) return Uniform01Prior{n};
  NormalPrior prior;
  prior.goods.assign(n, NormalGood{config.mean, config.stdev});
  return prior;
}

inline std::vector<double> draw_values(const ExperimentConfig& config, std::size_t n, Rng& rng) {
  std::vector<double> v(n);
  for (double& x : v) x = config.family == PriorFamily::uniform01 ? rng.uniform() : rng.normal(config.mean, config.stdev);
  return v;
}

// ---------------------------------------------------------------------------
// Divider best responses used inside experiments

/// Uniform prior, n = 2: exact closed-form objective on a 0.02 grid, then
/// local grid refinement around the incumbent down to step 1e-3.
inline SolveReport uniform2_best_response(std::span<const double> g) {
  if (g.size() != 2) throw DomainError("uniform2_best_response needs two goods");
  const PriorSpec prior = Uniform01Prior{2};
  auto score = [&](double a, double b) {
    const double P = detail::uniform2_prob_positive(a, b);
    return baseline_divider(g) + (0.5 - P) * (a * g[0] + b * g[1]);
  };
  double step = 0.02;
  double best_a = 0.0, best_b = 0.0, best = score(0.0, 0.0);
  auto scan = [&](double ca, double cb, int half) {
    for (int i = -half; i <= half; ++i) {
      for (int j = -half; j <= half; ++j) {
        const double a = std::clamp(ca + i * step, -1.0, 1.0), b = std::clamp(cb + j * step, -1.0, 1.0);
        const double v = score(a, b);
        if (v > best) {
          best = v;
          best_a = a;
          best_b = b;
        }
      }
    }
  };
  scan(0.0, 0.0, 50);
  while (step > 1e-3 + 1e-15) {
    step /= 5.0;
    scan(best_a, best_b, 10);
  }
  std::vector<double> q{best_a, best_b};
  const Instance instance{std::vector<double>(g.begin(), g.end()), prior};
  SolveReport report = exact_eval(instance, canonicalize(p_of_q(q), g));
  report.method = SolveMethod::grid_oracle;
  report.notes = "uniform n=2 refined grid, final step 1e-3";
  return report;
}

/// Uniform prior, n >= 3: the division is optimized against the moment-matched
/// normal prior N(1/2, 1/12); P and chooser utility are then estimated by
/// seeded Monte Carlo under the true uniform prior. Falls back to the even
/// split if that estimates better.
inline SolveReport uniform_large_best_response(std::span<const double> g, double gamma_rel, const MonteCarloOptions& mc) {
  const std::size_t n = g.size();
  NormalPrior approx;
  approx.goods.assign(n, NormalGood{0.5, std::sqrt(1.0 / 12.0)});
  const Instance normal_instance{std::vector<double>(g.begin(), g.end()), approx};
  NormalSolveConfig config;
  config.gamma = gamma_rel * abs_sum(g);
  const auto solved = solve_normal(normal_instance, config);
  const Instance instance{std::vector<double>(g.begin(), g.end()), Uniform01Prior{n}};
  SolveReport report = exact_eval(instance, solved.division, mc);
  if (report.divider_utility < report.baseline_divider) report = exact_eval(instance, Division::even(n), mc);
  report.method = SolveMethod::normal_fptas;
  report.notes = "uniform prior approximated by N(1/2,1/12) for the solve; " + report.notes;
  return report;
}

/// The divider's best response for an experiment family.
inline SolveReport family_best_response(const ExperimentConfig& config, std::span<const double> g, std::uint64_t trial) {
  const std::size_t n = g.size();
  if (config.family == PriorFamily::normal) {
    NormalSolveConfig nc;
    nc.gamma = config.gamma_rel * abs_sum(g);
    return solve_normal(Instance{std::vector<double>(g.begin(), g.end()), family_prior(config, n)}, nc);
  }
  if (n == 1) {
    return exact_eval(Instance{std::vector<double>(g.begin(), g.end()), Uniform01Prior{1}}, Division::even(1));
  }
  if (n == 2) return uniform2_best_response(g);
  return uniform_large_best_response(g, config.gamma_rel, MonteCarloOptions{splitmix64(config.seed ^ trial), config.mc_samples});
}

// ---------------------------------------------------------------------------
// Crossover (per-good utilities of both roles)

struct CrossoverRow {
  std::size_t n = 0;
  std::size_t trials = 0;
  double divider_per_good = 0.0;
  double chooser_per_good = 0.0;
  /// Standard error of the mean per-good difference (divider - chooser).
  double difference_stderr = 0.0;
  double mean_pile1_probability = 0.0;
  std::size_t below_baseline_trials = 0;
};

inline std::vector<CrossoverRow> crossover_experiment(const ExperimentConfig& config) {
  config.validate();
  std::vector<CrossoverRow> rows;
  for (std::size_t n : config.n_values) {
    struct Trial {
      double divider = 0.0, chooser = 0.0, P = 0.0;
      bool below = false;
    };
    const auto trials = parallel_map<Trial>(config.trials, [&](std::size_t t) {
      Rng rng(config.seed, (static_cast<std::uint64_t>(n) << 32) ^ t);
      const auto g = draw_values(config, n, rng);
      const auto report = family_best_response(config, g, (static_cast<std::uint64_t>(n) << 32) ^ t);
      Trial out;
      out.divider = report.divider_utility / static_cast<double>(n);
      out.chooser = report.chooser_utility.value_or(0.0) / static_cast<double>(n);
      out.P = report.pile1_probability;
      out.below = report.divider_utility < report.baseline_divider - 1e-12 * abs_sum(g);
      return out;
    });
    CrossoverRow row;
    row.n = n;
    row.trials = config.trials;
    double sum_d = 0.0, sum_c = 0.0, sum_diff = 0.0, sum_diff_sq = 0.0, sum_p = 0.0;
    for (const auto& t : trials) {
      sum_d += t.divider;
      sum_c += t.chooser;
      sum_diff += t.divider - t.chooser;
      sum_diff_sq += (t.divider - t.chooser) * (t.divider - t.chooser);
      sum_p += t.P;
      row.below_baseline_trials += t.below ? 1 : 0;
    }
    const double k = static_cast<double>(config.trials);
    row.divider_per_good = sum_d / k;
    row.chooser_per_good = sum_c / k;
    row.mean_pile1_probability = sum_p / k;
    if (config.trials > 1) {
      const double mean = sum_diff / k;
      const double var = std::max(0.0, (sum_diff_sq - k * mean * mean) / (k - 1.0));
      row.difference_stderr = std::sqrt(var / k);
    }
    rows.push_back(row);
  }
  return rows;
}

/// First n (in row order) from which the divider's per-good utility stays at
/// or above the chooser's; nullopt if it never does.
inline std::optional<std::size_t> crossover_point(const std::vector<CrossoverRow>& rows) {
  std::optional<std::size_t> out;
  for (const auto& r : rows) {
    if (r.divider_per_good >= r.chooser_per_good) {
      if (!out) out = r.n;
    } else {
      out.reset();
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Which role is better for a given value realization

struct RoleRow {
  std::vector<double> values;
  double deviation = 0.0;  // sum |v_i - mean|
  double divider_utility = 0.0;
  double chooser_utility = 0.0;
  bool divider_better = false;
};

struct RoleStudy {
  std::vector<RoleRow> rows;  // sorted by deviation
  double rank_correlation = 0.0;
  std::size_t ensemble = 0;
};

/// Optimal divisions of `count` independent dividers drawn from the family.
inline std::vector<Division> division_ensemble(const ExperimentConfig& config, std::size_t n, std::size_t count,
                                               std::uint64_t stream_base) {
  return parallel_map<Division>(count, [&](std::size_t k) {
    Rng rng(config.seed, stream_base + k);
    const auto g = draw_values(config, n, rng);
    return family_best_response(config, g, stream_base + k).division;
  });
}

/// Scores one value vector in both roles. The chooser side averages the exact
/// pick max(v.p, v.(1-p)) over the ensemble of dividers' optimal divisions.
inline RoleRow evaluate_role(const ExperimentConfig& config, std::span<const double> values,
                             const std::vector<Division>& ensemble, std::uint64_t trial = 0) {
  RoleRow row;
  row.values.assign(values.begin(), values.end());
  for (double v : values) row.deviation += std::abs(v - config.mean);
  row.divider_utility = family_best_response(config, values, trial).divider_utility;
  double total = 0.0;
  for (const auto& d : ensemble) {
    const auto [v1, v2] = pile_values(values, d);
    total += std::max(v1, v2);
  }
  row.chooser_utility = total / static_cast<double>(ensemble.size());
  row.divider_better = row.divider_utility > row.chooser_utility;
  return row;
}

/// Spearman correlation with average ranks for ties.
inline double spearman(std::span<const double> x, std::span<const double> y) {
  auto ranks = [](std::span<const double> v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
      std::size_t j = i;
      while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
      const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
      for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
      i = j + 1;
    }
    return r;
  };
  const auto rx = ranks(x), ry = ranks(y);
  const double m = (static_cast<double>(x.size()) + 1.0) / 2.0;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - m) * (ry[i] - m);
    sxx += (rx[i] - m) * (rx[i] - m);
    syy += (ry[i] - m) * (ry[i] - m);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

inline RoleStudy deviation_role_experiment(const ExperimentConfig& config) {
  config.validate();
  if (config.family != PriorFamily::normal) throw DomainError("the role study uses the normal family");
  const std::size_t n = config.n_values.front();
  RoleStudy study;
  study.ensemble = config.ensemble;
  const std::uint64_t ensemble_base = std::uint64_t{1} << 40;
  const auto ensemble = division_ensemble(config, n, config.ensemble, ensemble_base);
  study.rows = parallel_map<RoleRow>(config.trials, [&](std::size_t t) {
    Rng rng(config.seed, t);
    const auto values = draw_values(config, n, rng);
    return evaluate_role(config, values, ensemble, t);
  });
  std::stable_sort(study.rows.begin(), study.rows.end(),
                   [](const RoleRow& a, const RoleRow& b) { return a.deviation < b.deviation; });
  std::vector<double> dev, ind;
  for (const auto& r : study.rows) {
    dev.push_back(r.deviation);
    ind.push_back(r.divider_better ? 1.0 : 0.0);
  }
  study.rank_correlation = spearman(dev, ind);
  return study;
}

// ---------------------------------------------------------------------------
// Diversification under risk aversion

struct DiversificationRow {
  std::vector<double> divider_values;
  Division neutral, averse;
  std::size_t neutral_split = 0;
  std::size_t averse_split = 0;
};

inline std::size_t strictly_divided(const Division& d) {
  std::size_t k = 0;
  for (double p : d.p()) k += (p > 1e-9 && p < 1.0 - 1e-9) ? 1 : 0;
  return k;
}

inline std::vector<DiversificationRow> diversification_experiment(const ExperimentConfig& config) {
  config.validate();
  const std::size_t n = config.n_values.front();
  if (n > kGridMaxGoods) throw CapacityError("diversification study is grid based (n <= 4)", kGridMaxGoods);
  std::vector<DiversificationRow> rows(config.trials);
  for (std::size_t t = 0; t < config.trials; ++t) {
    Rng rng(config.seed, t);
    auto g = draw_values(config, n, rng);
    const Instance instance{g, family_prior(config, n)};
    DiversificationRow row;
    row.divider_values = g;
    row.neutral = solve_risk_averse(instance, RiskProfile::neutral(), RiskInterpretation::divisible, config.resolution).division;
    row.averse = solve_risk_averse(instance, config.risk, RiskInterpretation::divisible, config.resolution).division;
    row.neutral_split = strictly_divided(row.neutral);
    row.averse_split = strictly_divided(row.averse);
    rows[t] = std::move(row);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Localization certificate around an incumbent division

struct LocalizationBound {
  std::size_t good = 0;
  bool upward = false;      // constraint p_i >= incumbent_i + margin (else <=)
  bool empty = false;       // the constraint leaves [0,1]
  double bound = 0.0;       // upper bound on utility in the region
  std::uint64_t relaxed_steps = 0;
  std::uint64_t subproblems = 0;
};

struct LocalizationCertificate {
  double incumbent_utility = 0.0;
  double baseline = 0.0;
  double margin = 0.0;
  double gamma = 0.0;
  std::vector<LocalizationBound> bounds;
  bool certified = false;
};

/// Certifies ||p* - incumbent||_inf <= margin for every optimal canonical p*
/// when each region {p_i >= inc_i + margin} and {p_i <= inc_i - margin} has an
/// upper bound below the incumbent's exact utility. The bound starts from a
/// gamma sweep and is refined in P where needed. gamma = 0 selects
/// 1e-4 * sum|g|.
inline LocalizationCertificate localize_incumbent(const Instance& instance, const Division& incumbent, double margin,
                                                  double gamma = 0.0) {
  validate_instance(instance);
  if (!std::holds_alternative<NormalPrior>(instance.prior)) throw DomainError("localization requires a normal prior");
  if (incumbent.size() != instance.n()) throw DomainError("incumbent has the wrong number of goods");
  if (!(margin > 0.0)) throw DomainError("margin must be positive");
  const auto& g = instance.divider_values;
  if (gamma == 0.0) gamma = 1e-4 * abs_sum(g);
  LocalizationCertificate cert;
  cert.margin = margin;
  cert.gamma = gamma;
  cert.incumbent_utility = exact_eval(instance, incumbent).divider_utility;
  cert.baseline = baseline_divider(g);
  const std::size_t n = instance.n();
  bool all_below = true;
  for (std::size_t i = 0; i < n; ++i) {
    for (bool up : {false, true}) {
      LocalizationBound b;
      b.good = i;
      b.upward = up;
      std::vector<double> lo(n, -1.0), hi(n, 1.0);
      const double target = up ? incumbent[i] + margin : incumbent[i] - margin;
      if (target > 1.0 || target < 0.0) {
        b.empty = true;
        b.bound = -std::numeric_limits<double>::infinity();
        cert.bounds.push_back(b);
        continue;
      }
      // Keep a sliver of width so the box has an interior; widening only
      // loosens the bound.
      if (up) {
        lo[i] = std::min(2.0 * target - 1.0, 1.0 - 1e-9);
      } else {
        hi[i] = std::max(2.0 * target - 1.0, -1.0 + 1e-9);
      }
      const auto refined = refined_upper_bound(instance, gamma, lo, hi, cert.incumbent_utility);
      b.bound = refined.bound;
      b.relaxed_steps = refined.relaxed;
      b.subproblems = refined.subproblems;
      all_below = all_below && refined.below_target;
      cert.bounds.push_back(b);
    }
  }
  cert.certified = all_below && cert.incumbent_utility > cert.baseline;
  return cert;
}

// ---------------------------------------------------------------------------
// CSV emission

inline std::string csv_number(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

inline void write_crossover_csv(std::ostream& os, const std::vector<CrossoverRow>& rows) {
  os << "n,trials,divider_per_good,chooser_per_good,difference_stderr,mean_pile1_probability\n";
  for (const auto& r : rows) {
    os << r.n << ',' << r.trials << ',' << csv_number(r.divider_per_good) << ',' << csv_number(r.chooser_per_good) << ','
       << csv_number(r.difference_stderr) << ',' << csv_number(r.mean_pile1_probability) << '\n';
  }
}

inline void write_role_csv(std::ostream& os, const RoleStudy& study) {
  os << "deviation,divider_utility,chooser_utility,better_role,ensemble,values\n";
  for (const auto& r : study.rows) {
    os << csv_number(r.deviation) << ',' << csv_number(r.divider_utility) << ',' << csv_number(r.chooser_utility) << ','
       << (r.divider_better ? "divider" : "chooser") << ',' << study.ensemble << ',';
    for (std::size_t i = 0; i < r.values.size(); ++i) os << (i ? ";" : "") << csv_number(r.values[i]);
    os << '\n';
  }
}

inline void write_diversification_csv(std::ostream& os, const std::vector<DiversificationRow>& rows) {
  os << "trial,divider_values,p_neutral,p_averse,split_neutral,split_averse\n";
  auto join = [](std::span<const double> v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + csv_number(v[i]);
    return s;
  };
  for (std::size_t t = 0; t < rows.size(); ++t) {
    const auto& r = rows[t];
    os << t << ',' << join(r.divider_values) << ',' << join(r.neutral.p()) << ',' << join(r.averse.p()) << ','
       << r.neutral_split << ',' << r.averse_split << '\n';
  }
}

}  // namespace dnc
