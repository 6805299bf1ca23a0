#include "crn/ode.hpp"

#include <algorithm>
#include <cmath>

#include "crn/errors.hpp"
#include "crn/numfmt.hpp"
#include "crn/ssa.hpp"

namespace crn {
namespace {

struct Change {
  std::size_t species;
  double delta;
};

class MassActionSystem {
 public:
  explicit MassActionSystem(const ReactionNetwork& network) : network_(network) {
    const auto matrix = build_stoichiometry(network);
    changes_.resize(network.reactions.size());
    for (std::size_t j = 0; j < matrix.cols(); ++j)
      for (std::size_t i = 0; i < matrix.rows(); ++i)
        if (matrix.at(i, j) != 0) changes_[j].push_back({i, static_cast<double>(matrix.at(i, j))});
  }

  std::size_t dim() const { return network_.species.size(); }

  void operator()(std::span<const double> x, std::span<double> dx) const {
    std::fill(dx.begin(), dx.end(), 0.0);
    for (std::size_t j = 0; j < changes_.size(); ++j) {
      const double r = mass_action_rate(network_.reactions[j], x);
      for (const auto& c : changes_[j]) dx[c.species] += c.delta * r;
    }
  }

 private:
  const ReactionNetwork& network_;
  std::vector<std::vector<Change>> changes_;
};

class Rk4 {
 public:
  explicit Rk4(const MassActionSystem& f) : f_(f), k1_(f.dim()), k2_(f.dim()), k3_(f.dim()), k4_(f.dim()), tmp_(f.dim()) {}

  void step(std::span<const double> x, double h, std::span<double> out) {
    const std::size_t n = x.size();
    f_(x, k1_);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = x[i] + 0.5 * h * k1_[i];
    f_(tmp_, k2_);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = x[i] + 0.5 * h * k2_[i];
    f_(tmp_, k3_);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = x[i] + h * k3_[i];
    f_(tmp_, k4_);
    for (std::size_t i = 0; i < n; ++i) out[i] = x[i] + h / 6.0 * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
  }

 private:
  const MassActionSystem& f_;
  std::vector<double> k1_, k2_, k3_, k4_, tmp_;
};

// Dormand-Prince 5(4) tableau.
class Dopri5 {
 public:
  explicit Dopri5(const MassActionSystem& f) : f_(f), k_(7, std::vector<double>(f.dim())), tmp_(f.dim()) {}

  /// Fifth-order solution into `out`, error estimate into `err`.
  void step(std::span<const double> x, double h, std::span<double> out, std::span<double> err) {
    static constexpr double a[7][6] = {
        {},
        {1.0 / 5},
        {3.0 / 40, 9.0 / 40},
        {44.0 / 45, -56.0 / 15, 32.0 / 9},
        {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
        {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
        {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
    };
    static constexpr double b5[7] = {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84, 0.0};
    static constexpr double b4[7] = {5179.0 / 57600, 0.0,           7571.0 / 16695, 393.0 / 640,
                                     -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};
    const std::size_t n = x.size();
    f_(x, k_[0]);
    for (int s = 1; s < 7; ++s) {
      for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int p = 0; p < s; ++p) acc += a[s][p] * k_[p][i];
        tmp_[i] = x[i] + h * acc;
      }
      f_(tmp_, k_[s]);
    }
    for (std::size_t i = 0; i < n; ++i) {
      double hi = 0.0;
      double lo = 0.0;
      for (int s = 0; s < 7; ++s) {
        hi += b5[s] * k_[s][i];
        lo += b4[s] * k_[s][i];
      }
      out[i] = x[i] + h * hi;
      err[i] = h * (hi - lo);
    }
  }

 private:
  const MassActionSystem& f_;
  std::vector<std::vector<double>> k_;
  std::vector<double> tmp_;
};

/// Clamps small negative undershoot; returns whether anything was clamped.
bool check_state(std::span<double> x, double abs_tol, double t) {
  bool clamped = false;
  for (double& v : x) {
    if (!std::isfinite(v)) throw InstabilityError("non-finite state at t=" + format_double(t) + "; reduce dt");
    if (v < 0.0) {
      if (v < -abs_tol)
        throw InstabilityError("state undershoot " + format_double(v) + " at t=" + format_double(t) + "; reduce dt");
      v = 0.0;
      clamped = true;
    }
  }
  return clamped;
}

std::vector<double> resolve_grid(const OdeConfig& config) {
  if (config.grid.empty()) return uniform_grid(config.t_end, kDefaultGridPoints);
  for (std::size_t i = 0; i < config.grid.size(); ++i) {
    const double g = config.grid[i];
    if (!(g >= 0.0 && g <= config.t_end) || (i > 0 && g <= config.grid[i - 1]))
      throw GridOutOfRangeError("output grid must be strictly ascending within [0, t_end]");
  }
  return config.grid;
}

Trajectory integrate_fixed(const MassActionSystem& f, const ReactionNetwork& network, const OdeConfig& config,
                           double dt, const std::vector<double>& grid, Trajectory traj) {
  Rk4 rk4(f);
  const std::size_t n_steps = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(config.t_end / dt - 1e-9)));
  auto node_time = [&](std::size_t k) {
    return k >= n_steps ? config.t_end : std::min(static_cast<double>(k) * dt, config.t_end);
  };

  std::vector<double> x = network.initial_state();
  std::vector<double> next(x.size());
  std::vector<double> partial(x.size());
  std::size_t g = 0;
  for (std::size_t k = 0;; ++k) {
    const double t = node_time(k);
    const double t_next = k < n_steps ? node_time(k + 1) : config.t_end;
    // Grid points in [t, t_next) come from a shortened step off the main path.
    while (g < grid.size() && (grid[g] < t_next || k == n_steps)) {
      if (grid[g] == t) {
        traj.append(grid[g], x);
      } else {
        rk4.step(x, grid[g] - t, partial);
        check_state(partial, config.abs_tol, grid[g]);
        traj.append(grid[g], partial);
      }
      ++g;
    }
    if (k == n_steps) break;
    rk4.step(x, t_next - t, next);
    if (check_state(next, config.abs_tol, t_next)) ++traj.clamped_steps;
    x.swap(next);
    ++traj.steps;
  }
  return traj;
}

Trajectory integrate_adaptive(const MassActionSystem& f, const ReactionNetwork& network, const OdeConfig& config,
                              double h0, const std::vector<double>& grid, Trajectory traj) {
  Dopri5 dopri(f);
  std::vector<double> x = network.initial_state();
  std::vector<double> next(x.size());
  std::vector<double> err(x.size());
  double t = 0.0;
  double h = h0;
  const double h_min = 1e-14 * std::max(1.0, config.t_end);
  for (double g : grid) {
    while (t < g) {
      const double step = std::min(h, g - t);
      dopri.step(x, step, next, err);
      double norm = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double scale = config.abs_tol + config.rel_tol * std::max(std::abs(x[i]), std::abs(next[i]));
        norm = std::max(norm, std::abs(err[i]) / scale);
      }
      if (!std::isfinite(norm)) norm = 1e10;
      if (norm <= 1.0) {
        t = (step == g - t) ? g : t + step;
        if (check_state(next, config.abs_tol, t)) ++traj.clamped_steps;
        x.swap(next);
        ++traj.steps;
      }
      const double factor = norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(norm, -0.2), 0.2, 5.0);
      // An accepted step shortened to land on g leaves h alone.
      if (!(norm <= 1.0 && step < h)) h = step * factor;
      if (h < h_min) throw InstabilityError("adaptive step size underflow at t=" + format_double(t));
    }
    traj.append(g, x);
  }
  return traj;
}

}  // namespace

std::vector<double> rhs(const ReactionNetwork& network, std::span<const double> state) {
  MassActionSystem f(network);
  std::vector<double> dx(state.size());
  f(state, dx);
  return dx;
}

double default_ode_step(const ReactionNetwork& network) {
  const double scale = network.total_initial_amount();
  double fastest = 0.0;
  for (const auto& r : network.reactions) fastest = std::max(fastest, effective_rate(r, scale));
  if (fastest <= 0.0) return 0.01;
  return std::min(0.01, 0.1 / fastest);
}

Trajectory simulate_ode(const ReactionNetwork& network, const OdeConfig& config) {
  if (!(config.t_end > 0.0)) throw Error("t_end must be positive");
  if (config.dt && !(*config.dt > 0.0)) throw Error("dt must be positive");
  if (!(config.rel_tol > 0.0) || !(config.abs_tol > 0.0)) throw Error("tolerances must be positive");

  const auto grid = resolve_grid(config);
  MassActionSystem f(network);
  Trajectory traj;
  for (const auto& s : network.species) traj.species.push_back(s.name);
  traj.t_end = config.t_end;
  traj.terminated_by = Termination::TEnd;

  const double dt = config.dt.value_or(default_ode_step(network));
  if (config.method == OdeMethod::FixedRk4) return integrate_fixed(f, network, config, dt, grid, std::move(traj));
  return integrate_adaptive(f, network, config, dt, grid, std::move(traj));
}

}  // namespace crn
