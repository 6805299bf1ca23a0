#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace crn {

enum class Termination { TEnd, Exhausted, StepCap };

std::string_view to_string(Termination t);

/// Recorded time series of one SSA or ODE run. States are stored row-major;
/// SSA populations are integral values held exactly in doubles.
struct Trajectory {
  std::vector<std::string> species;
  std::vector<double> times;
  std::vector<double> values;
  double t_end = 0.0;
  Termination terminated_by = Termination::TEnd;
  std::size_t steps = 0;
  /// ODE only: steps whose small negative undershoot was clamped to 0.
  std::size_t clamped_steps = 0;

  std::size_t size() const noexcept { return times.size(); }
  std::size_t width() const noexcept { return species.size(); }

  std::span<const double> state(std::size_t i) const { return {values.data() + i * width(), width()}; }

  void append(double time, std::span<const double> state) {
    times.push_back(time);
    values.insert(values.end(), state.begin(), state.end());
  }

  /// `time,<species...>` header then one row per recorded point.
  std::string to_csv() const;
};

/// Zero-order hold: the state at the last recorded time <= each grid point.
/// Throws GridOutOfRangeError for points outside [0, t_end].
std::vector<std::vector<double>> sample_on_grid(const Trajectory& trajectory, std::span<const double> grid);

/// `n` evenly spaced points from 0 to t_end inclusive.
std::vector<double> uniform_grid(double t_end, std::size_t n);

}  // namespace crn
