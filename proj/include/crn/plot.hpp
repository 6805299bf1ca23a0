#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crn/ensemble.hpp"
#include "crn/trajectory.hpp"

namespace crn {

struct PlotOptions {
  /// nullopt plots every species; an explicit empty list is an error.
  std::optional<std::vector<std::string>> species;
  std::string title;
  int width = 800;
  int height = 500;
  /// Ensembles only: draw the p5-p95 band behind each mean line.
  bool band = true;
};

/// SVG 1.1 with one polyline per selected species. Every polyline carries
/// `data-times` and `data-values` attributes holding the plotted numbers
/// formatted exactly as in the CSV exports; bands carry `data-p05` and
/// `data-p95` the same way.
std::string emit_plot(const EnsembleResult& result, const PlotOptions& options = {});
std::string emit_plot(const Trajectory& trajectory, const PlotOptions& options = {});

}  // namespace crn
