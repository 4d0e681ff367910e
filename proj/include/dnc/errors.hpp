#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dnc {

/// Invalid input: bad dimensions, out-of-range fractions, malformed priors.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A configured size cap (types, grid points, outcomes) would be exceeded.
class CapacityError : public std::runtime_error {
 public:
  CapacityError(const std::string& what, std::size_t cap)
      : std::runtime_error(what + " (cap " + std::to_string(cap) + ")"), cap_(cap) {}
  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t cap_;
};

/// A numerical subsolver did not converge. Carries the best feasible point
/// found so far so callers can still make use of it.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, std::vector<double> best_feasible)
      : std::runtime_error(what), best_feasible_(std::move(best_feasible)) {}
  const std::vector<double>& best_feasible() const noexcept { return best_feasible_; }

 private:
  std::vector<double> best_feasible_;
};

}  // namespace dnc
