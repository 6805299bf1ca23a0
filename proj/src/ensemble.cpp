#include "crn/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "crn/errors.hpp"
#include "crn/numfmt.hpp"
#include "crn/rng.hpp"
#include "crn/ssa.hpp"

namespace crn {

bool McConfig::is_resolved() const {
  return n_runs.has_value() && t_end.has_value() && std::holds_alternative<std::vector<double>>(grid);
}

ResolvedMcConfig auto_params(const ReactionNetwork& network, const McConfig& config) {
  ResolvedMcConfig out{config, {}};
  McConfig& c = out.config;

  if (!c.t_end) {
    if (const auto* explicit_grid = std::get_if<std::vector<double>>(&c.grid); explicit_grid && !explicit_grid->empty()) {
      c.t_end = explicit_grid->back();
      out.trace.push_back("t_end = " + format_double(*c.t_end) + " (last point of the explicit grid)");
    } else {
      std::vector<std::int64_t> state;
      for (const auto& s : network.species) state.push_back(static_cast<std::int64_t>(std::floor(s.initial_amount)));
      bool can_fire = false;
      for (std::size_t j = 0; j < network.reactions.size(); ++j) {
        const auto& r = network.reactions[j];
        if (reaction_rate(network, j, state, PropensityMode::PaperPowerLaw) > 0.0 ||
            (r.reactants.empty() && r.rate_constant > 0.0))
          can_fire = true;
      }
      if (!can_fire) throw AllRatesZeroError();

      const double scale = network.total_initial_amount();
      double k_slow = std::numeric_limits<double>::infinity();
      std::string slow_name;
      for (const auto& r : network.reactions) {
        if (!(r.rate_constant > 0.0)) continue;
        const double k = effective_rate(r, scale);
        if (k > 0.0 && k < k_slow) {
          k_slow = k;
          slow_name = r.name;
        }
      }
      const double raw = kAutoTEndFactor / k_slow;
      c.t_end = std::clamp(raw, kAutoTEndMin, kAutoTEndMax);
      out.trace.push_back("t_end = clamp(5 / k_slow, 1, 1e6) = " + format_double(*c.t_end) + " with k_slow = " +
                          format_double(k_slow) + " from reaction '" + slow_name +
                          "' (k * M^(order-1), M = " + format_double(std::max(scale, 1.0)) + ")");
    }
  }
  if (!c.n_runs) {
    c.n_runs = kDefaultRuns;
    out.trace.push_back("n_runs = " + std::to_string(kDefaultRuns) + " (default)");
  }
  if (const auto* ag = std::get_if<AutoGrid>(&c.grid)) {
    const std::size_t n = ag->n_points;
    c.grid = uniform_grid(*c.t_end, n);
    out.trace.push_back("grid = " + std::to_string(n) + " uniform points over [0, " + format_double(*c.t_end) + "]");
  }
  return out;
}

double percentile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return std::clamp(sorted[lo] + frac * (sorted[hi] - sorted[lo]), sorted[lo], sorted[hi]);
}

EnsembleResult run_ensemble(const ReactionNetwork& network, const McConfig& input) {
  ResolvedMcConfig resolved = auto_params(network, input);
  const McConfig& config = resolved.config;
  const auto& grid = std::get<std::vector<double>>(config.grid);
  const std::size_t n_runs = *config.n_runs;
  if (n_runs < 1) throw Error("n_runs must be at least 1");
  if (grid.empty() || grid.front() != 0.0) throw GridOutOfRangeError("ensemble grid must start at 0");
  const std::size_t n_grid = grid.size();
  const std::size_t n_species = network.species.size();
  const std::size_t cells = n_grid * n_species;

  // samples[r * cells + g * n_species + s]
  std::vector<double> samples(n_runs * cells);
  std::vector<ReplicateInfo> infos(n_runs);

  auto run_one = [&](std::size_t r) {
    SimConfig sim;
    sim.t_end = *config.t_end;
    sim.max_steps = config.max_steps;
    sim.seed = replicate_seed(config.base_seed, r);
    sim.mode = config.mode;
    sim.record = RecordOnGrid{grid};
    const Trajectory traj = simulate_ssa(network, sim);
    double* out = samples.data() + r * cells;
    for (std::size_t g = 0; g < n_grid; ++g) {
      // A step-capped run is held at its last recorded state.
      const std::size_t src = std::min(g, traj.size() - 1);
      const auto state = traj.state(src);
      std::copy(state.begin(), state.end(), out + g * n_species);
    }
    infos[r] = {sim.seed, traj.terminated_by, traj.steps};
  };

  unsigned workers = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n_runs));
  if (workers <= 1) {
    for (std::size_t r = 0; r < n_runs; ++r) run_one(r);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t r; (r = next.fetch_add(1)) < n_runs;) {
          try {
            run_one(r);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    pool.clear();
    if (failure) std::rethrow_exception(failure);
  }

  EnsembleResult result;
  for (const auto& s : network.species) result.species.push_back(s.name);
  result.grid = grid;
  result.n_runs = n_runs;
  result.replicates = std::move(infos);
  result.config = config;
  result.trace = std::move(resolved.trace);
  result.mean.resize(cells);
  result.stddev.resize(cells);
  result.p05.resize(cells);
  result.p50.resize(cells);
  result.p95.resize(cells);

  std::vector<double> column(n_runs);
  for (std::size_t cell = 0; cell < cells; ++cell) {
    double sum = 0.0;
    for (std::size_t r = 0; r < n_runs; ++r) {
      column[r] = samples[r * cells + cell];
      sum += column[r];
    }
    const double mean = sum / static_cast<double>(n_runs);
    double ss = 0.0;
    for (double v : column) ss += (v - mean) * (v - mean);
    std::sort(column.begin(), column.end());
    // Keep the mean inside [min, max] despite rounding.
    result.mean[cell] = std::clamp(mean, column.front(), column.back());
    result.stddev[cell] = n_runs > 1 ? std::sqrt(ss / static_cast<double>(n_runs - 1)) : 0.0;
    result.p05[cell] = percentile_sorted(column, 0.05);
    result.p50[cell] = percentile_sorted(column, 0.50);
    result.p95[cell] = percentile_sorted(column, 0.95);
  }
  return result;
}

std::string EnsembleResult::to_csv() const {
  std::string out = "time";
  for (const auto& s : species)
    for (const char* suffix : {"_mean", "_std", "_p05", "_p50", "_p95"}) out += "," + s + suffix;
  out += "\n";
  for (std::size_t g = 0; g < grid.size(); ++g) {
    out += format_double(grid[g]);
    for (std::size_t s = 0; s < species.size(); ++s) {
      for (const auto* stat : {&mean, &stddev, &p05, &p50, &p95}) out += "," + format_double(at(*stat, g, s));
    }
    out += "\n";
  }
  return out;
}

std::string EnsembleResult::metadata_json() const {
  nlohmann::ordered_json doc;
  doc["engine"] = "ssa-direct";
  doc["generator"] = std::string(kGeneratorId);
  doc["seed_split"] = "replicate_seed(base, r) = mix64(base ^ mix64(r)), mix64 = SplitMix64 finalizer";
  nlohmann::ordered_json cfg;
  cfg["n_runs"] = n_runs;
  cfg["t_end"] = config.t_end.value_or(0.0);
  cfg["grid_points"] = grid.size();
  cfg["base_seed"] = config.base_seed;
  cfg["mode"] = std::string(to_string(config.mode));
  cfg["max_steps"] = config.max_steps;
  doc["config"] = cfg;
  doc["heuristic_trace"] = trace;
  nlohmann::ordered_json reps = nlohmann::ordered_json::array();
  for (const auto& r : replicates) {
    nlohmann::ordered_json item;
    item["seed"] = r.seed;
    item["termination"] = std::string(to_string(r.terminated_by));
    item["steps"] = r.steps;
    reps.push_back(std::move(item));
  }
  doc["replicates"] = std::move(reps);
  return doc.dump(2) + "\n";
}

bool EnsembleResult::same_results(const EnsembleResult& o) const {
  return species == o.species && grid == o.grid && mean == o.mean && stddev == o.stddev && p05 == o.p05 &&
         p50 == o.p50 && p95 == o.p95 && n_runs == o.n_runs && replicates == o.replicates && trace == o.trace &&
         config.base_seed == o.config.base_seed && config.t_end == o.config.t_end && config.mode == o.config.mode;
}

}  // namespace crn
