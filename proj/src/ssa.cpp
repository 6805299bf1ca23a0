#include "crn/ssa.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include <json.hpp>

#include "crn/errors.hpp"
#include "crn/rng.hpp"

namespace crn {
namespace {

struct Change {
  std::size_t species;
  std::int64_t delta;
};

struct CompiledReaction {
  std::vector<ReactionTerm> reactants;
  std::vector<Change> changes;
  std::vector<std::size_t> dependents;  // reactions whose propensity reads a changed species
};

std::vector<CompiledReaction> compile(const ReactionNetwork& network) {
  const auto matrix = build_stoichiometry(network);
  const std::size_t n = network.reactions.size();
  std::vector<CompiledReaction> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    out[j].reactants = network.reactions[j].reactants;
    for (std::size_t i = 0; i < matrix.rows(); ++i) {
      if (matrix.at(i, j) != 0) out[j].changes.push_back({i, matrix.at(i, j)});
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t other = 0; other < n; ++other) {
      const bool reads_changed = std::any_of(out[other].reactants.begin(), out[other].reactants.end(),
                                             [&](const ReactionTerm& t) {
                                               return std::any_of(out[j].changes.begin(), out[j].changes.end(),
                                                                  [&](const Change& c) { return c.species == t.species; });
                                             });
      if (reads_changed) out[j].dependents.push_back(other);
    }
  }
  return out;
}

std::vector<double> resolve_grid(const SimConfig& config) {
  const auto* on_grid = std::get_if<RecordOnGrid>(&config.record);
  if (!on_grid) return {};
  if (on_grid->points.empty()) return uniform_grid(config.t_end, kDefaultGridPoints);
  for (std::size_t i = 0; i < on_grid->points.size(); ++i) {
    const double g = on_grid->points[i];
    if (!(g >= 0.0 && g <= config.t_end) || (i > 0 && g <= on_grid->points[i - 1]))
      throw GridOutOfRangeError("recording grid must be strictly ascending within [0, t_end]");
  }
  return on_grid->points;
}

}  // namespace

Trajectory simulate_ssa(const ReactionNetwork& network, const SimConfig& config) {
  if (!(config.t_end > 0.0)) throw Error("t_end must be positive");
  if (config.max_steps < 1) throw Error("max_steps must be at least 1");

  const auto reactions = compile(network);
  const std::size_t n_reactions = reactions.size();
  const std::size_t n_species = network.species.size();
  const bool record_all = std::holds_alternative<RecordAll>(config.record);
  const auto grid = resolve_grid(config);

  Trajectory traj;
  for (const auto& s : network.species) traj.species.push_back(s.name);
  traj.t_end = config.t_end;

  std::vector<std::int64_t> state(n_species);
  for (std::size_t i = 0; i < n_species; ++i)
    state[i] = static_cast<std::int64_t>(std::floor(network.species[i].initial_amount));
  std::vector<double> row(n_species);
  auto snapshot = [&]() -> std::span<const double> {
    for (std::size_t i = 0; i < n_species; ++i) row[i] = static_cast<double>(state[i]);
    return row;
  };

  std::size_t next_grid = 0;
  auto record_grid_before = [&](double t_limit, bool inclusive) {
    while (next_grid < grid.size() && (grid[next_grid] < t_limit || (inclusive && grid[next_grid] == t_limit))) {
      traj.append(grid[next_grid], snapshot());
      ++next_grid;
    }
  };

  if (record_all) traj.append(0.0, snapshot());

  std::vector<double> propensity(n_reactions);
  for (std::size_t j = 0; j < n_reactions; ++j) propensity[j] = reaction_rate(network, j, state, config.mode);

  Rng rng(config.seed);
  double t = 0.0;
  std::uint64_t steps = 0;
  for (;;) {
    double a0 = 0.0;
    for (double a : propensity) a0 += a;
    if (!(a0 > 0.0)) {
      traj.terminated_by = Termination::Exhausted;
      record_grid_before(config.t_end, true);
      break;
    }
    if (steps >= config.max_steps) {
      traj.terminated_by = Termination::StepCap;
      record_grid_before(t, true);
      break;
    }
    const double u1 = rng.uniform_open_closed();
    const double u2 = rng.uniform();
    const double t_next = t - std::log(u1) / a0;
    if (t_next > config.t_end) {
      traj.terminated_by = Termination::TEnd;
      record_grid_before(config.t_end, true);
      break;
    }

    const double target = u2 * a0;
    std::size_t chosen = n_reactions;
    double cumulative = 0.0;
    for (std::size_t j = 0; j < n_reactions; ++j) {
      if (propensity[j] <= 0.0) continue;
      cumulative += propensity[j];
      chosen = j;
      if (cumulative > target) break;
    }
    // Rounding can leave cumulative <= target; `chosen` is then the last positive reaction.

    record_grid_before(t_next, false);
    for (const auto& c : reactions[chosen].changes) {
      state[c.species] += c.delta;
      assert(state[c.species] >= 0);
    }
    for (std::size_t dep : reactions[chosen].dependents)
      propensity[dep] = reaction_rate(network, dep, state, config.mode);
    t = t_next;
    ++steps;

    if (record_all) {
      if (traj.times.back() == t) {
        auto s = snapshot();
        std::copy(s.begin(), s.end(), traj.values.end() - static_cast<std::ptrdiff_t>(n_species));
      } else {
        traj.append(t, snapshot());
      }
    }
  }
  traj.steps = steps;
  return traj;
}

std::string ssa_metadata_json(const SimConfig& config, const Trajectory& trajectory) {
  nlohmann::ordered_json doc;
  doc["engine"] = "ssa-direct";
  doc["generator"] = std::string(kGeneratorId);
  doc["seed"] = config.seed;
  doc["mode"] = std::string(to_string(config.mode));
  doc["t_end"] = config.t_end;
  doc["max_steps"] = config.max_steps;
  doc["record"] = std::holds_alternative<RecordAll>(config.record) ? "all" : "grid";
  doc["termination"] = std::string(to_string(trajectory.terminated_by));
  doc["steps"] = trajectory.steps;
  doc["points"] = trajectory.size();
  return doc.dump(2) + "\n";
}

}  // namespace crn
