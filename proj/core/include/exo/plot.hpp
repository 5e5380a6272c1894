#pragma once

// SVG line plots of per-algorithm mean curves with a +-1 SE band.

#include <string>
#include <vector>

#include "exo/experiment.hpp"

namespace exo {

struct SeriesPoint {
  int episode = 0;
  double mean = 0.0;
  double se = 0.0;
};

struct Series {
  std::string label;
  std::vector<SeriesPoint> points;
};

enum class Metric { instant_regret, cumulative_regret, model_error };

const char* metric_name(Metric m) noexcept;

/// Mean and standard error across seeds at every episode, one series per
/// algorithm in sorted label order.
std::vector<Series> aggregate(const std::vector<RunRecord>& records, Metric metric);

std::string render_svg(const std::vector<Series>& series, const std::string& title,
                       const std::string& y_label);

/// Writes <dir>/<experiment>_<metric>.svg for each metric and returns the
/// paths. Throws InvalidInput on empty records and IoError on write failure.
std::vector<std::string> render_plots(const std::vector<RunRecord>& records, const std::string& dir);

}  // namespace exo
