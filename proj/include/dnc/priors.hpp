#pragma once

// Pile-1 probability and chooser expected utility for each prior family.
//
// Tie convention: a chooser who values both piles equally takes pile 2, so
// P = Pr[sum_i q_i g^C_i > 0]. For finite priors the comparison uses a
// relative tolerance (kTieTolerance) so that sums which are zero in exact
// arithmetic but carry rounding residue still count as ties.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "dnc/errors.hpp"
#include "dnc/model.hpp"
#include "dnc/normal_dist.hpp"
#include "dnc/prior_types.hpp"
#include "dnc/rng.hpp"

namespace dnc {

inline constexpr double kTieTolerance = 1e-12;
inline constexpr std::size_t kDefaultFlattenCap = 4096;
inline constexpr std::size_t kEnumerationCap = std::size_t{1} << 24;

struct MonteCarloOptions {
  std::uint64_t seed = 0x5eedULL;
  std::size_t samples = 400000;
};

struct Estimate {
  double value = 0.0;
  double standard_error = 0.0;  // 0 for exact evaluations
};

namespace detail {

inline void require(bool ok, const char* msg) {
  if (!ok) throw DomainError(msg);
}

/// True when the chooser strictly prefers pile 1 given s = sum q_i x_i and
/// scale = sum |q_i x_i|.
inline bool picks_pile1(double s, double scale) { return s > kTieTolerance * scale; }

}  // namespace detail

inline void validate_prior(const PriorSpec& prior) {
  using detail::require;
  struct {
    void operator()(const NormalPrior& p) const {
      require(!p.goods.empty(), "normal prior has no goods");
      for (const auto& g : p.goods) {
        require(std::isfinite(g.mean), "normal mean must be finite");
        require(std::isfinite(g.stdev) && g.stdev > 0.0, "normal stdev must be positive");
      }
    }
    void operator()(const DiscretePerGoodPrior& p) const {
      require(!p.goods.empty(), "discrete prior has no goods");
      for (const auto& support : p.goods) {
        require(!support.empty(), "discrete good has empty support");
        double total = 0.0;
        for (std::size_t a = 0; a < support.size(); ++a) {
          require(std::isfinite(support[a].value), "discrete value must be finite");
          require(support[a].prob > 0.0, "discrete probabilities must be positive");
          total += support[a].prob;
          for (std::size_t b = 0; b < a; ++b) require(support[a].value != support[b].value, "discrete values must be distinct");
        }
        require(std::abs(total - 1.0) <= 1e-12, "discrete probabilities must sum to 1");
      }
    }
    void operator()(const Uniform01Prior& p) const { require(p.n > 0, "uniform prior needs n > 0"); }
    void operator()(const JointDiscretePrior& p) const {
      require(!p.types.empty(), "joint prior has no types");
      const std::size_t n = p.types.front().values.size();
      require(n > 0, "joint prior types have no goods");
      double total = 0.0;
      for (std::size_t a = 0; a < p.types.size(); ++a) {
        const auto& t = p.types[a];
        require(t.values.size() == n, "joint prior types differ in length");
        require(t.prob > 0.0, "joint prior probabilities must be positive");
        for (double v : t.values) require(std::isfinite(v), "joint prior values must be finite");
        total += t.prob;
        for (std::size_t b = 0; b < a; ++b) require(p.types[b].values != t.values, "joint prior types must be distinct");
      }
      require(std::abs(total - 1.0) <= 1e-12, "joint prior probabilities must sum to 1");
    }
  } visitor;
  std::visit(visitor, prior);
}

inline void validate_instance(const Instance& instance) {
  validate_divider_values(instance.divider_values);
  validate_prior(instance.prior);
  if (prior_size(instance.prior) != instance.n()) throw DomainError("prior describes a different number of goods");
}

inline JointDiscretePrior flatten_to_joint(const DiscretePerGoodPrior& prior, std::size_t cap = kDefaultFlattenCap) {
  std::size_t count = 1;
  for (const auto& support : prior.goods) {
    if (support.empty()) throw DomainError("discrete good has empty support");
    if (count > cap / support.size()) throw CapacityError("flattened joint prior too large", cap);
    count *= support.size();
  }
  if (count > cap) throw CapacityError("flattened joint prior too large", cap);

  JointDiscretePrior joint;
  joint.types.reserve(count);
  const std::size_t n = prior.goods.size();
  std::vector<std::size_t> idx(n, 0);
  for (std::size_t k = 0; k < count; ++k) {
    ChooserType t;
    t.values.resize(n);
    t.prob = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      t.values[i] = prior.goods[i][idx[i]].value;
      t.prob *= prior.goods[i][idx[i]].prob;
    }
    joint.types.push_back(std::move(t));
    for (std::size_t i = n; i-- > 0;) {  // odometer, last good fastest
      if (++idx[i] < prior.goods[i].size()) break;
      idx[i] = 0;
    }
  }
  return joint;
}

namespace detail {

/// Calls fn(values, prob) for every support point of a per-good discrete prior.
template <typename Fn>
void for_each_product_type(const DiscretePerGoodPrior& prior, Fn&& fn) {
  std::size_t count = 1;
  for (const auto& s : prior.goods) {
    if (count > kEnumerationCap / s.size()) throw CapacityError("discrete prior enumeration too large", kEnumerationCap);
    count *= s.size();
  }
  const std::size_t n = prior.goods.size();
  std::vector<std::size_t> idx(n, 0);
  std::vector<double> values(n);
  for (std::size_t k = 0; k < count; ++k) {
    double prob = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      values[i] = prior.goods[i][idx[i]].value;
      prob *= prior.goods[i][idx[i]].prob;
    }
    fn(std::span<const double>(values), prob);
    for (std::size_t i = n; i-- > 0;) {
      if (++idx[i] < prior.goods[i].size()) break;
      idx[i] = 0;
    }
  }
}

template <typename Fn>
void for_each_type(const PriorSpec& prior, Fn&& fn) {
  if (const auto* d = std::get_if<DiscretePerGoodPrior>(&prior)) {
    for_each_product_type(*d, fn);
  } else if (const auto* j = std::get_if<JointDiscretePrior>(&prior)) {
    for (const auto& t : j->types) fn(std::span<const double>(t.values), t.prob);
  }
}

inline void check_dimension(const PriorSpec& prior, std::size_t n) {
  if (prior_size(prior) != n) throw DomainError("dimension mismatch between prior and division");
}

inline bool is_zero(std::span<const double> q) {
  return std::all_of(q.begin(), q.end(), [](double v) { return v == 0.0; });
}

// Closed forms for two i.i.d. U[0,1] values u, v and s = a u + b v.
inline double uniform2_prob_positive(double a, double b) {
  if (a <= 0.0 && b <= 0.0) return 0.0;
  if (a >= 0.0 && b >= 0.0) return 1.0;
  if (a < 0.0) std::swap(a, b);  // now a > 0 > b
  const double c = -b;
  return a <= c ? a / (2.0 * c) : 1.0 - c / (2.0 * a);
}

inline double uniform2_positive_part_mean(double a, double b) {
  if (a <= 0.0 && b <= 0.0) return 0.0;
  if (a >= 0.0 && b >= 0.0) return 0.5 * (a + b);
  if (a < 0.0) std::swap(a, b);
  const double c = -b;
  return a <= c ? a * a / (6.0 * c) : 0.5 * (a - c) + c * c / (6.0 * a);
}

}  // namespace detail

/// Monte-Carlo estimate of P for i.i.d. uniform values.
inline Estimate uniform_pile1_probability_mc(std::span<const double> q, const MonteCarloOptions& mc) {
  Rng rng(mc.seed, 0x9117);
  std::size_t hits = 0;
  for (std::size_t k = 0; k < mc.samples; ++k) {
    double s = 0.0;
    for (double qi : q) s += qi * rng.uniform();
    hits += s > 0.0 ? 1 : 0;
  }
  const double p = static_cast<double>(hits) / static_cast<double>(mc.samples);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(mc.samples))};
}

/// P = Pr[chooser strictly prefers pile 1], with a standard error when the
/// family requires sampling (uniform, n >= 3).
inline Estimate pile1_probability_estimate(const PriorSpec& prior, std::span<const double> q,
                                           const MonteCarloOptions& mc = {}) {
  detail::check_dimension(prior, q.size());
  if (detail::is_zero(q)) return {0.0, 0.0};

  if (const auto* normal = std::get_if<NormalPrior>(&prior)) {
    double m = 0.0, var = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
      m += normal->goods[i].mean * q[i];
      var += normal->goods[i].stdev * normal->goods[i].stdev * q[i] * q[i];
    }
    if (var <= 0.0) return {0.0, 0.0};
    return {std_normal_cdf(m / std::sqrt(var)), 0.0};
  }
  if (std::holds_alternative<Uniform01Prior>(prior)) {
    if (q.size() == 1) return {q[0] > 0.0 ? 1.0 : 0.0, 0.0};
    if (q.size() == 2) return {detail::uniform2_prob_positive(q[0], q[1]), 0.0};
    return uniform_pile1_probability_mc(q, mc);
  }
  double p = 0.0;
  detail::for_each_type(prior, [&](std::span<const double> x, double prob) {
    double s = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
      s += q[i] * x[i];
      scale += std::abs(q[i] * x[i]);
    }
    if (detail::picks_pile1(s, scale)) p += prob;
  });
  return {std::clamp(p, 0.0, 1.0), 0.0};
}

inline double pile1_probability(const PriorSpec& prior, std::span<const double> q, const MonteCarloOptions& mc = {}) {
  return pile1_probability_estimate(prior, q, mc).value;
}

/// E over chooser values of max(pile-1 value, pile-2 value).
inline Estimate chooser_expected_utility_estimate(const PriorSpec& prior, const Division& division,
                                                  const MonteCarloOptions& mc = {}) {
  detail::check_dimension(prior, division.size());
  const auto q = division.q();
  const std::size_t n = division.size();

  if (const auto* normal = std::get_if<NormalPrior>(&prior)) {
    double pile2 = 0.0, m = 0.0, var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& g = normal->goods[i];
      pile2 += (1.0 - division[i]) * g.mean;
      m += q[i] * g.mean;
      var += q[i] * q[i] * g.stdev * g.stdev;
    }
    if (var <= 0.0) return {pile2 + std::max(m, 0.0), 0.0};
    const double s = std::sqrt(var);
    return {pile2 + m * std_normal_cdf(m / s) + s * std_normal_pdf(m / s), 0.0};
  }
  if (std::holds_alternative<Uniform01Prior>(prior)) {
    double pile2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) pile2 += 0.5 * (1.0 - division[i]);
    if (n == 1) return {pile2 + 0.5 * std::max(q[0], 0.0), 0.0};
    if (n == 2) return {pile2 + detail::uniform2_positive_part_mean(q[0], q[1]), 0.0};
    Rng rng(mc.seed, 0xc405e);
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t k = 0; k < mc.samples; ++k) {
      double v1 = 0.0, v2 = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double u = rng.uniform();
        v1 += division[i] * u;
        v2 += (1.0 - division[i]) * u;
      }
      const double best = std::max(v1, v2);
      sum += best;
      sum_sq += best * best;
    }
    const double ns = static_cast<double>(mc.samples);
    const double mean = sum / ns;
    const double var_s = std::max(0.0, sum_sq / ns - mean * mean);
    return {mean, std::sqrt(var_s / ns)};
  }
  double total = 0.0;
  detail::for_each_type(prior, [&](std::span<const double> x, double prob) {
    double v1 = 0.0, v2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      v1 += division[i] * x[i];
      v2 += (1.0 - division[i]) * x[i];
    }
    total += prob * std::max(v1, v2);
  });
  return {total, 0.0};
}

inline double chooser_expected_utility(const PriorSpec& prior, const Division& division,
                                       const MonteCarloOptions& mc = {}) {
  return chooser_expected_utility_estimate(prior, division, mc).value;
}

/// Draws one chooser value vector from the prior.
inline std::vector<double> sample_values(const PriorSpec& prior, Rng& rng) {
  std::vector<double> out(prior_size(prior));
  if (const auto* normal = std::get_if<NormalPrior>(&prior)) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = rng.normal(normal->goods[i].mean, normal->goods[i].stdev);
  } else if (std::holds_alternative<Uniform01Prior>(prior)) {
    for (double& v : out) v = rng.uniform();
  } else if (const auto* d = std::get_if<DiscretePerGoodPrior>(&prior)) {
    for (std::size_t i = 0; i < out.size(); ++i) {
      double u = rng.uniform();
      out[i] = d->goods[i].back().value;
      for (const auto& vp : d->goods[i]) {
        if (u < vp.prob) {
          out[i] = vp.value;
          break;
        }
        u -= vp.prob;
      }
    }
  } else {
    const auto& joint = std::get<JointDiscretePrior>(prior);
    double u = rng.uniform();
    out = joint.types.back().values;
    for (const auto& t : joint.types) {
      if (u < t.prob) {
        out = t.values;
        break;
      }
      u -= t.prob;
    }
  }
  return out;
}

}  // namespace dnc
