#include "crn/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <fmt/core.h>

#include "crn/errors.hpp"
#include "crn/numfmt.hpp"

namespace crn {
namespace {

constexpr std::array<const char*, 10> kPalette = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

constexpr double kLeft = 70.0;
constexpr double kRight = 150.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 55.0;

struct Series {
  std::string name;
  std::vector<double> values;
  std::vector<double> low;
  std::vector<double> high;
};

std::string escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string joined(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ' ';
    out += format_double(values[i]);
  }
  return out;
}

std::vector<std::size_t> select(const std::vector<std::string>& available, const PlotOptions& options) {
  std::vector<std::size_t> picked;
  if (!options.species) {
    for (std::size_t i = 0; i < available.size(); ++i) picked.push_back(i);
  } else {
    for (const auto& name : *options.species) {
      auto it = std::find(available.begin(), available.end(), name);
      if (it == available.end()) throw Error("cannot plot unknown species '" + name + "'");
      picked.push_back(static_cast<std::size_t>(it - available.begin()));
    }
  }
  if (picked.empty()) throw EmptySelectionError();
  return picked;
}

class Canvas {
 public:
  Canvas(const PlotOptions& options, const std::vector<double>& times, const std::vector<Series>& series)
      : options_(options) {
    if (options.width <= kLeft + kRight || options.height <= kTop + kBottom)
      throw Error("plot dimensions too small");
    t0_ = times.empty() ? 0.0 : times.front();
    t1_ = times.empty() ? 1.0 : times.back();
    if (!(t1_ > t0_)) t1_ = t0_ + 1.0;
    y1_ = 0.0;
    for (const auto& s : series) {
      for (double v : s.values) y1_ = std::max(y1_, v);
      for (double v : s.high) y1_ = std::max(y1_, v);
    }
    y1_ = y1_ > 0.0 ? y1_ * 1.05 : 1.0;
  }

  double x(double t) const {
    return kLeft + (t - t0_) / (t1_ - t0_) * (options_.width - kLeft - kRight);
  }
  double y(double v) const {
    const double plot_h = options_.height - kTop - kBottom;
    return options_.height - kBottom - v / y1_ * plot_h;
  }

  std::string axes() const {
    std::string out;
    const double bottom = options_.height - kBottom;
    const double right = options_.width - kRight;
    out += fmt::format(R"(  <g class="axes" stroke="#000" stroke-width="1" fill="none">)"
                       "\n"
                       R"(    <line x1="{0:.2f}" y1="{1:.2f}" x2="{2:.2f}" y2="{1:.2f}"/>)"
                       "\n"
                       R"(    <line x1="{0:.2f}" y1="{3:.2f}" x2="{0:.2f}" y2="{1:.2f}"/>)"
                       "\n  </g>\n",
                       kLeft, bottom, right, kTop);
    out += R"(  <g class="ticks" font-family="sans-serif" font-size="11" fill="#000">)" "\n";
    constexpr int kTicks = 5;
    for (int i = 0; i <= kTicks; ++i) {
      const double t = t0_ + (t1_ - t0_) * i / kTicks;
      const double v = y1_ * i / kTicks;
      out += fmt::format(R"(    <line x1="{0:.2f}" y1="{1:.2f}" x2="{0:.2f}" y2="{2:.2f}" stroke="#000"/>)"
                         "\n"
                         R"(    <text x="{0:.2f}" y="{3:.2f}" text-anchor="middle">{4:.4g}</text>)"
                         "\n",
                         x(t), bottom, bottom + 5, bottom + 18, t);
      out += fmt::format(R"(    <line x1="{0:.2f}" y1="{1:.2f}" x2="{2:.2f}" y2="{1:.2f}" stroke="#000"/>)"
                         "\n"
                         R"(    <text x="{3:.2f}" y="{4:.2f}" text-anchor="end">{5:.4g}</text>)"
                         "\n",
                         kLeft - 5, y(v), kLeft, kLeft - 8, y(v) + 4, v);
    }
    out += "  </g>\n";
    out += fmt::format(R"(  <text x="{:.2f}" y="{:.2f}" text-anchor="middle" font-family="sans-serif" )"
                       R"(font-size="13">time</text>)"
                       "\n",
                       (kLeft + right) / 2, static_cast<double>(options_.height) - 12);
    out += fmt::format(R"(  <text x="16" y="{0:.2f}" text-anchor="middle" font-family="sans-serif" )"
                       R"svg(font-size="13" transform="rotate(-90 16 {0:.2f})">count</text>)svg"
                       "\n",
                       (kTop + bottom) / 2);
    return out;
  }

  std::string points(const std::vector<double>& times, const std::vector<double>& values) const {
    std::string out;
    for (std::size_t i = 0; i < times.size(); ++i) {
      if (i) out += ' ';
      out += fmt::format("{:.2f},{:.2f}", x(times[i]), y(values[i]));
    }
    return out;
  }

 private:
  const PlotOptions& options_;
  double t0_, t1_, y1_;
};

std::string render(const PlotOptions& options, const std::vector<double>& times, const std::vector<Series>& series) {
  Canvas canvas(options, times, series);
  std::string out;
  out += R"(<?xml version="1.0" encoding="UTF-8" standalone="no"?>)" "\n";
  out += fmt::format(R"(<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{0}" height="{1}" )"
                     R"(viewBox="0 0 {0} {1}">)"
                     "\n",
                     options.width, options.height);
  out += fmt::format(R"(  <rect width="{}" height="{}" fill="#fff"/>)" "\n", options.width, options.height);
  if (!options.title.empty()) {
    out += fmt::format(R"(  <text x="{:.2f}" y="24" text-anchor="middle" font-family="sans-serif" )"
                       R"(font-size="15">{}</text>)"
                       "\n",
                       (kLeft + options.width - kRight) / 2, escape(options.title));
  }
  out += canvas.axes();
  const std::string times_attr = joined(times);

  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    if (s.low.empty()) continue;
    std::string poly = canvas.points(times, s.high);
    std::vector<double> rev_t(times.rbegin(), times.rend());
    std::vector<double> rev_low(s.low.rbegin(), s.low.rend());
    poly += ' ' + canvas.points(rev_t, rev_low);
    out += fmt::format(R"(  <polygon class="band" data-species="{}" data-times="{}" data-p05="{}" data-p95="{}" )"
                       R"(fill="{}" fill-opacity="0.2" stroke="none" points="{}"/>)"
                       "\n",
                       escape(s.name), times_attr, joined(s.low), joined(s.high), kPalette[i % kPalette.size()], poly);
  }
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    out += fmt::format(R"(  <polyline class="series" data-species="{}" data-times="{}" data-values="{}" )"
                       R"(fill="none" stroke="{}" stroke-width="1.5" points="{}"/>)"
                       "\n",
                       escape(s.name), times_attr, joined(s.values), kPalette[i % kPalette.size()],
                       canvas.points(times, s.values));
  }

  out += R"(  <g class="legend" font-family="sans-serif" font-size="12">)" "\n";
  const double lx = options.width - kRight + 15;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double ly = kTop + 10 + 18.0 * static_cast<double>(i);
    out += fmt::format(R"(    <line x1="{:.2f}" y1="{:.2f}" x2="{:.2f}" y2="{:.2f}" stroke="{}" stroke-width="2"/>)"
                       "\n"
                       R"(    <text x="{:.2f}" y="{:.2f}">{}</text>)"
                       "\n",
                       lx, ly, lx + 20, ly, kPalette[i % kPalette.size()], lx + 26, ly + 4, escape(series[i].name));
  }
  out += "  </g>\n";
  out += "</svg>\n";
  return out;
}

}  // namespace

std::string emit_plot(const EnsembleResult& result, const PlotOptions& options) {
  if (result.grid.empty()) throw Error("cannot plot an empty ensemble");
  std::vector<Series> series;
  for (std::size_t s : select(result.species, options)) {
    Series item;
    item.name = result.species[s];
    for (std::size_t g = 0; g < result.grid.size(); ++g) {
      item.values.push_back(result.at(result.mean, g, s));
      if (options.band) {
        item.low.push_back(result.at(result.p05, g, s));
        item.high.push_back(result.at(result.p95, g, s));
      }
    }
    series.push_back(std::move(item));
  }
  return render(options, result.grid, series);
}

std::string emit_plot(const Trajectory& trajectory, const PlotOptions& options) {
  if (trajectory.size() == 0) throw Error("cannot plot an empty trajectory");
  std::vector<Series> series;
  for (std::size_t s : select(trajectory.species, options)) {
    Series item;
    item.name = trajectory.species[s];
    for (std::size_t i = 0; i < trajectory.size(); ++i) item.values.push_back(trajectory.state(i)[s]);
    series.push_back(std::move(item));
  }
  return render(options, trajectory.times, series);
}

}  // namespace crn
