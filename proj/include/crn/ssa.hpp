#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "crn/model.hpp"
#include "crn/trajectory.hpp"

namespace crn {

/// Record every event.
struct RecordAll {};

/// Record the held state at fixed time points. Empty `points` means
/// kDefaultGridPoints evenly spaced points over [0, t_end].
struct RecordOnGrid {
  std::vector<double> points;
};

inline constexpr std::size_t kDefaultGridPoints = 200;

struct SimConfig {
  double t_end = 1.0;
  std::uint64_t max_steps = 100'000'000;
  std::uint64_t seed = 0;
  PropensityMode mode = PropensityMode::PaperPowerLaw;
  std::variant<RecordAll, RecordOnGrid> record = RecordOnGrid{};
};

/// Gillespie direct method. Initial amounts are floored to integer counts.
///
/// Each step draws u1 in (0, 1] and u2 in [0, 1) from the seeded stream,
/// advances time by -ln(u1)/a0, and fires the first reaction j whose
/// cumulative propensity exceeds u2*a0. A run ends at t_end, when every
/// propensity is 0 (Exhausted), or after `max_steps` events (StepCap).
/// With RecordAll, an event whose time rounds onto the previous one
/// replaces that row so recorded times stay strictly ascending.
Trajectory simulate_ssa(const ReactionNetwork& network, const SimConfig& config);

/// Sidecar metadata for a trajectory CSV.
std::string ssa_metadata_json(const SimConfig& config, const Trajectory& trajectory);

}  // namespace crn
