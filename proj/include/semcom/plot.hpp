#ifndef SEMCOM_PLOT_HPP
#define SEMCOM_PLOT_HPP

#include <string>
#include <vector>

#include "semcom/report.hpp"

namespace semcom {

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  bool markers_only = false;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
};

/// Line/scatter chart as standalone SVG text. Throws std::invalid_argument
/// when there is nothing to draw.
std::string render_svg(const PlotSpec& spec);

/// Chooses a chart for a CSV produced by the experiments:
/// tau/r_plus/r_minus tables become a (-R+, R-) scatter with the Pareto
/// frontier polyline; a `provider` column splits series; otherwise the first
/// column is x and the remaining value columns (excluding *_se and ci95_*) are series.
PlotSpec plot_for_csv(const CsvTable& table, const std::string& title);

/// Writes `<csv stem>.svg` next to each CSV; returns the SVG paths.
std::vector<std::string> emit_plots(const std::vector<std::string>& csv_paths);

}  // namespace semcom

#endif  // SEMCOM_PLOT_HPP
