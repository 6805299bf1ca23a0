#include "crn/trajectory.hpp"

#include <algorithm>

#include "crn/errors.hpp"
#include "crn/numfmt.hpp"

namespace crn {

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::TEnd:
      return "t_end";
    case Termination::Exhausted:
      return "exhausted";
    case Termination::StepCap:
      return "step_cap";
  }
  return "t_end";
}

std::string Trajectory::to_csv() const {
  std::string out = "time";
  for (const auto& s : species) out += "," + s;
  out += "\n";
  for (std::size_t i = 0; i < size(); ++i) {
    out += format_double(times[i]);
    for (double v : state(i)) out += "," + format_double(v);
    out += "\n";
  }
  return out;
}

std::vector<std::vector<double>> sample_on_grid(const Trajectory& trajectory, std::span<const double> grid) {
  std::vector<std::vector<double>> out;
  out.reserve(grid.size());
  for (double g : grid) {
    if (!(g >= 0.0 && g <= trajectory.t_end))
      throw GridOutOfRangeError("grid point " + format_double(g) + " outside [0, " + format_double(trajectory.t_end) +
                                "]");
    auto it = std::upper_bound(trajectory.times.begin(), trajectory.times.end(), g);
    // times[0] == 0 <= g, so there is always a predecessor.
    const auto idx = static_cast<std::size_t>(std::distance(trajectory.times.begin(), it)) - 1;
    auto s = trajectory.state(idx);
    out.emplace_back(s.begin(), s.end());
  }
  return out;
}

std::vector<double> uniform_grid(double t_end, std::size_t n) {
  if (n == 0) return {};
  if (n == 1) return {0.0};
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) grid[i] = t_end * static_cast<double>(i) / static_cast<double>(n - 1);
  grid.back() = t_end;
  return grid;
}

}  // namespace crn
