#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "crn/model.hpp"
#include "crn/trajectory.hpp"

namespace crn {

struct AutoGrid {
  std::size_t n_points = 200;
};

/// Unset optionals and AutoGrid are resolved by auto_params().
struct McConfig {
  std::optional<std::size_t> n_runs;
  std::variant<std::vector<double>, AutoGrid> grid = AutoGrid{};
  std::optional<double> t_end;
  std::uint64_t base_seed = 0;
  PropensityMode mode = PropensityMode::PaperPowerLaw;
  std::uint64_t max_steps = 100'000'000;

  /// Worker threads; 0 uses the hardware concurrency. Never affects results.
  unsigned threads = 0;

  bool is_resolved() const;
};

inline constexpr std::size_t kDefaultRuns = 100;
inline constexpr double kAutoTEndFactor = 5.0;
inline constexpr double kAutoTEndMin = 1.0;
inline constexpr double kAutoTEndMax = 1e6;

struct ResolvedMcConfig {
  McConfig config;
  /// Human-readable record of every defaulted value and why.
  std::vector<std::string> trace;
};

/// Fills unset fields:
///   t_end  = 5 / k_slow, clamped to [1, 1e6], where k_slow is the smallest
///            positive effective_rate() over reactions with k > 0
///            (effective_rate = k * M^(order-1), M = total initial amount);
///            an explicit grid without t_end uses its last point
///   n_runs = 100
///   grid   = AutoGrid::n_points evenly spaced points over [0, t_end]
/// Throws AllRatesZeroError when t_end must be derived but no reaction has a
/// positive propensity at t=0 and no source reaction has k > 0.
ResolvedMcConfig auto_params(const ReactionNetwork& network, const McConfig& config = {});

struct ReplicateInfo {
  std::uint64_t seed = 0;
  Termination terminated_by = Termination::TEnd;
  std::uint64_t steps = 0;

  bool operator==(const ReplicateInfo&) const = default;
};

/// Per-cell statistics over replicates; each matrix is grid x species, row-major.
struct EnsembleResult {
  std::vector<std::string> species;
  std::vector<double> grid;
  std::vector<double> mean;
  std::vector<double> stddev;  // sample standard deviation, 0 for a single run
  std::vector<double> p05;
  std::vector<double> p50;
  std::vector<double> p95;
  std::size_t n_runs = 0;
  std::vector<ReplicateInfo> replicates;
  McConfig config;
  std::vector<std::string> trace;

  double at(const std::vector<double>& stat, std::size_t grid_index, std::size_t species_index) const {
    return stat[grid_index * species.size() + species_index];
  }

  /// `time` then `<species>_mean,_std,_p05,_p50,_p95` for each species.
  std::string to_csv() const;
  /// Seeds, resolved config, heuristic trace, generator id.
  std::string metadata_json() const;

  /// Equality of everything except the worker count.
  bool same_results(const EnsembleResult& other) const;
};

/// Replicate r runs simulate_ssa with seed replicate_seed(base_seed, r) and is
/// sampled on the common grid by zero-order hold. Aggregation runs in
/// replicate order, so results do not depend on `threads`. Unresolved
/// fields go through auto_params() first.
EnsembleResult run_ensemble(const ReactionNetwork& network, const McConfig& config);

/// Linear-interpolation percentile (q in [0,1]) of an ascending sequence.
double percentile_sorted(const std::vector<double>& sorted, double q);

}  // namespace crn
