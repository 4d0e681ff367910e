#pragma once

// Log-barrier interior-point method for
//
//   maximize   c . z
//   subject to lower <= z <= upper            (bounds may be infinite)
//              || scale o z ||_2 <= axis . z   (one second-order cone)
//
// The barrier is -log(z - lower) - log(upper - z) - log((axis.z)^2 - ||scale o z||^2),
// which is self-concordant, so damped Newton steps of length 1/(1 + lambda)
// never leave the domain. After the final centering step the duality gap is
// at most nu / t, with nu = (#finite bounds) + 2.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "dnc/errors.hpp"

namespace dnc {

struct ConeBoxProgram {
  std::vector<double> objective;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<double> axis;
  std::vector<double> scale;

  std::size_t size() const noexcept { return objective.size(); }
};

struct BarrierOptions {
  double gap_tolerance = 1e-9;
  double t_growth = 16.0;
  std::uint64_t max_newton_steps = 4000;
};

struct BarrierResult {
  std::vector<double> z;
  double objective = 0.0;
  std::uint64_t newton_steps = 0;
  bool stopped_early = false;
};

namespace detail {

struct BarrierState {
  const ConeBoxProgram& prog;

  double cone_margin(const Eigen::VectorXd& z, double* tau_out = nullptr) const {
    double tau = 0.0, xx = 0.0;
    for (std::size_t i = 0; i < prog.size(); ++i) {
      tau += prog.axis[i] * z[i];
      const double x = prog.scale[i] * z[i];
      xx += x * x;
    }
    if (tau_out) *tau_out = tau;
    if (tau <= 0.0) return -1.0;
    return tau * tau - xx;
  }

  bool in_domain(const Eigen::VectorXd& z) const {
    for (std::size_t i = 0; i < prog.size(); ++i) {
      if (!(z[i] > prog.lower[i] && z[i] < prog.upper[i])) return false;
    }
    return cone_margin(z) > 0.0;
  }

  // Gradient and Hessian of  -t c.z + barrier(z).
  void derivatives(const Eigen::VectorXd& z, double t, Eigen::VectorXd& grad, Eigen::MatrixXd& hess) const {
    const auto n = static_cast<Eigen::Index>(prog.size());
    grad.setZero(n);
    hess.setZero(n, n);
    double tau = 0.0;
    const double psi = cone_margin(z, &tau);
    Eigen::VectorXd dpsi(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto k = static_cast<std::size_t>(i);
      dpsi[i] = 2.0 * tau * prog.axis[k] - 2.0 * prog.scale[k] * prog.scale[k] * z[i];
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto k = static_cast<std::size_t>(i);
      double g = -t * prog.objective[k] - dpsi[i] / psi;
      double h = 2.0 * prog.scale[k] * prog.scale[k] / psi;
      if (std::isfinite(prog.lower[k])) {
        const double s = z[i] - prog.lower[k];
        g -= 1.0 / s;
        h += 1.0 / (s * s);
      }
      if (std::isfinite(prog.upper[k])) {
        const double s = prog.upper[k] - z[i];
        g += 1.0 / s;
        h += 1.0 / (s * s);
      }
      grad[i] = g;
      hess(i, i) += h;
    }
    Eigen::VectorXd a(n);
    for (Eigen::Index i = 0; i < n; ++i) a[i] = prog.axis[static_cast<std::size_t>(i)];
    hess.noalias() -= (2.0 / psi) * a * a.transpose();
    hess.noalias() += (1.0 / (psi * psi)) * dpsi * dpsi.transpose();
  }
};

}  // namespace detail

/// Follows the central path from a strictly feasible start. `stop`, when set,
/// is checked after every Newton step and ends the solve early (used by the
/// phase-one search for a strictly feasible point).
inline BarrierResult maximize_cone_box(const ConeBoxProgram& prog, std::span<const double> start,
                                       const BarrierOptions& opts = {},
                                       const std::function<bool(std::span<const double>)>& stop = {}) {
  const std::size_t n = prog.size();
  if (prog.lower.size() != n || prog.upper.size() != n || prog.axis.size() != n || prog.scale.size() != n ||
      start.size() != n) {
    throw DomainError("cone program dimension mismatch");
  }
  detail::BarrierState state{prog};
  Eigen::VectorXd z(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) z[static_cast<Eigen::Index>(i)] = start[i];
  if (!state.in_domain(z)) throw DomainError("barrier start point is not strictly feasible");

  auto to_vec = [&](const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
  auto objective_at = [&](const Eigen::VectorXd& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += prog.objective[i] * v[static_cast<Eigen::Index>(i)];
    return s;
  };

  double nu = 2.0;
  double c_norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    nu += std::isfinite(prog.lower[i]) ? 1.0 : 0.0;
    nu += std::isfinite(prog.upper[i]) ? 1.0 : 0.0;
    c_norm += std::abs(prog.objective[i]);
  }
  double t = nu / std::max(c_norm, 1e-300);

  BarrierResult result;
  Eigen::VectorXd grad, step;
  Eigen::MatrixXd hess;
  Eigen::LDLT<Eigen::MatrixXd> ldlt;
  for (;;) {
    for (;;) {
      if (result.newton_steps >= opts.max_newton_steps) {
        throw SolverError("cone program: Newton step budget exhausted", to_vec(z));
      }
      state.derivatives(z, t, grad, hess);
      ldlt.compute(hess);
      step = ldlt.solve(-grad);
      const double lambda_sq = -grad.dot(step);
      ++result.newton_steps;
      if (!std::isfinite(lambda_sq) || lambda_sq < 1e-10) break;
      const double lambda = std::sqrt(lambda_sq);
      double alpha = lambda > 0.25 ? 1.0 / (1.0 + lambda) : 1.0;
      Eigen::VectorXd next = z + alpha * step;
      int halvings = 0;
      while (!state.in_domain(next) && halvings < 60) {
        alpha *= 0.5;
        next = z + alpha * step;
        ++halvings;
      }
      if (halvings == 60) break;
      z = next;
      if (stop && stop(to_vec(z))) {
        result.z = to_vec(z);
        result.objective = objective_at(z);
        result.stopped_early = true;
        return result;
      }
      if (lambda_sq < 1e-10) break;
    }
    if (nu / t <= opts.gap_tolerance) break;
    t *= opts.t_growth;
  }
  result.z = to_vec(z);
  result.objective = objective_at(z);
  return result;
}

}  // namespace dnc
