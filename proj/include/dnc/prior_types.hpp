#pragma once

#include <cstddef>
#include <variant>
#include <vector>

namespace dnc {

struct NormalGood {
  double mean = 0.0;
  double stdev = 1.0;
};

/// Independent normal prior per good.
struct NormalPrior {
  std::vector<NormalGood> goods;
};

struct ValueProb {
  double value = 0.0;
  double prob = 0.0;
};

/// Independent finite-support prior per good.
struct DiscretePerGoodPrior {
  std::vector<std::vector<ValueProb>> goods;
};

/// All goods i.i.d. uniform on [0, 1].
struct Uniform01Prior {
  std::size_t n = 0;
};

struct ChooserType {
  std::vector<double> values;
  double prob = 0.0;
};

/// Explicit finite list of chooser value vectors; values may be correlated
/// across goods.
struct JointDiscretePrior {
  std::vector<ChooserType> types;
};

using PriorSpec = std::variant<NormalPrior, DiscretePerGoodPrior, Uniform01Prior, JointDiscretePrior>;

inline std::size_t prior_size(const PriorSpec& prior) {
  struct {
    std::size_t operator()(const NormalPrior& p) const { return p.goods.size(); }
    std::size_t operator()(const DiscretePerGoodPrior& p) const { return p.goods.size(); }
    std::size_t operator()(const Uniform01Prior& p) const { return p.n; }
    std::size_t operator()(const JointDiscretePrior& p) const {
      return p.types.empty() ? 0 : p.types.front().values.size();
    }
  } visitor;
  return std::visit(visitor, prior);
}

}  // namespace dnc
