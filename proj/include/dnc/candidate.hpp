#pragma once

#include <algorithm>
#include <limits>
#include <vector>

namespace dnc {

/// A division evaluated exactly: utility, pile-1 probability, and q.
struct Candidate {
  double utility = -std::numeric_limits<double>::infinity();
  double pile1_probability = 1.0;
  std::vector<double> q;
  double P_grid = 0.0;  // sweep value or subset mass that produced it
  bool valid = false;
};

/// Strict total order used by every reduction: higher utility, then smaller
/// P, then lexicographically smaller q.
inline bool better(const Candidate& a, const Candidate& b) {
  if (!a.valid) return false;
  if (!b.valid) return true;
  if (a.utility != b.utility) return a.utility > b.utility;
  if (a.pile1_probability != b.pile1_probability) return a.pile1_probability < b.pile1_probability;
  return std::lexicographical_compare(a.q.begin(), a.q.end(), b.q.begin(), b.q.end());
}

inline void keep_better(Candidate& best, Candidate&& c) {
  if (better(c, best)) best = std::move(c);
}

}  // namespace dnc
