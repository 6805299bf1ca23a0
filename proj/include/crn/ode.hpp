#pragma once

#include <optional>
#include <span>
#include <vector>

#include "crn/model.hpp"
#include "crn/trajectory.hpp"

namespace crn {

enum class OdeMethod {
  /// Classic fourth-order Runge-Kutta with a fixed step.
  FixedRk4,
  /// Dormand-Prince 5(4) with error control.
  AdaptiveDopri5,
};

struct OdeConfig {
  double t_end = 1.0;
  OdeMethod method = OdeMethod::FixedRk4;
  /// Fixed step; default_ode_step(network) when unset.
  std::optional<double> dt;
  double rel_tol = 1e-6;
  /// Also the largest negative undershoot that is clamped to 0 instead of failing.
  double abs_tol = 1e-8;
  /// Output times; kDefaultGridPoints evenly spaced points when empty.
  std::vector<double> grid;
};

/// dX/dt = S r(X) with r_i = k_i prod X_j^a_ij.
std::vector<double> rhs(const ReactionNetwork& network, std::span<const double> state);

/// min(0.01, 0.1 / max_i effective_rate_i), using the total initial amount as scale.
double default_ode_step(const ReactionNetwork& network);

/// Integrates from the initial amounts (not floored). Throws InstabilityError
/// on a non-finite state or an undershoot below -abs_tol.
Trajectory simulate_ode(const ReactionNetwork& network, const OdeConfig& config);

}  // namespace crn
