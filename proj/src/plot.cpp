#include "semcom/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <map>
#include <stdexcept>

#include "semcom/analysis.hpp"

namespace semcom {

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 70, kRight = 170, kTop = 40, kBottom = 50;
const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

bool parse_number(const std::string& s, double& v) {
  if (s.empty()) return false;
  char* end = nullptr;
  v = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

bool numeric_column(const CsvTable& t, std::size_t c) {
  double v = 0.0;
  return std::all_of(t.rows.begin(), t.rows.end(), [&](const auto& r) { return parse_number(r[c], v); });
}

bool skipped(const std::string& name) {
  return name.ends_with("_se") || name.starts_with("ci95") || name == "objects";
}

}  // namespace

std::string render_svg(const PlotSpec& spec) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  std::size_t points = 0;
  for (const auto& s : spec.series) {
    if (s.x.size() != s.y.size()) throw std::invalid_argument("plot series has mismatched x/y");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
      ++points;
    }
  }
  if (points == 0) throw std::invalid_argument("plot has no data points");
  if (x1 == x0) { x0 -= 0.5; x1 += 0.5; }
  if (y1 == y0) { y0 -= 0.5; y1 += 0.5; }
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return kTop + ph - (y - y0) / (y1 - y0) * ph; };

  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) + "\" height=\"" +
                    fmt(kHeight) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + fmt(kWidth / 2) + "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" +
         escape(spec.title) + "</text>\n";
  svg += "<g class=\"axes\" stroke=\"black\">\n<line x1=\"" + fmt(kLeft) + "\" y1=\"" + fmt(kTop + ph) + "\" x2=\"" +
         fmt(kLeft + pw) + "\" y2=\"" + fmt(kTop + ph) + "\"/>\n<line x1=\"" + fmt(kLeft) + "\" y1=\"" + fmt(kTop) +
         "\" x2=\"" + fmt(kLeft) + "\" y2=\"" + fmt(kTop + ph) + "\"/>\n</g>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = x0 + (x1 - x0) * i / 4.0, yv = y0 + (y1 - y0) * i / 4.0;
    svg += "<text x=\"" + fmt(px(xv)) + "\" y=\"" + fmt(kTop + ph + 16) + "\" text-anchor=\"middle\">" + tick(xv) + "</text>\n";
    svg += "<text x=\"" + fmt(kLeft - 6) + "\" y=\"" + fmt(py(yv) + 4) + "\" text-anchor=\"end\">" + tick(yv) + "</text>\n";
  }
  svg += "<text x=\"" + fmt(kLeft + pw / 2) + "\" y=\"" + fmt(kHeight - 10) + "\" text-anchor=\"middle\">" +
         escape(spec.x_label) + "</text>\n";
  svg += "<text x=\"16\" y=\"" + fmt(kTop + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
         fmt(kTop + ph / 2) + ")\">" + escape(spec.y_label) + "</text>\n";

  for (std::size_t k = 0; k < spec.series.size(); ++k) {
    const auto& s = spec.series[k];
    const std::string color = kPalette[k % std::size(kPalette)];
    if (s.markers_only) {
      svg += "<g class=\"series\" fill=\"" + color + "\">\n";
      for (std::size_t i = 0; i < s.x.size(); ++i)
        svg += "<circle cx=\"" + fmt(px(s.x[i])) + "\" cy=\"" + fmt(py(s.y[i])) + "\" r=\"2.5\"/>\n";
      svg += "</g>\n";
    } else {
      svg += "<polyline class=\"series\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < s.x.size(); ++i) svg += (i ? " " : "") + fmt(px(s.x[i])) + "," + fmt(py(s.y[i]));
      svg += "\"/>\n";
    }
    const double ly = kTop + 14.0 * static_cast<double>(k);
    svg += "<rect x=\"" + fmt(kWidth - kRight + 12) + "\" y=\"" + fmt(ly) + "\" width=\"10\" height=\"10\" fill=\"" +
           color + "\"/><text x=\"" + fmt(kWidth - kRight + 27) + "\" y=\"" + fmt(ly + 9) + "\">" + escape(s.name) +
           "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

PlotSpec plot_for_csv(const CsvTable& table, const std::string& title) {
  if (table.rows.empty()) throw std::invalid_argument("CSV '" + title + "' has no rows to plot");
  PlotSpec spec;
  spec.title = title;
  const auto& h = table.header;
  const bool has = std::find(h.begin(), h.end(), "r_plus") != h.end() &&
                   std::find(h.begin(), h.end(), "r_minus") != h.end() &&
                   std::find(h.begin(), h.end(), "tau") != h.end();
  const bool by_provider = std::find(h.begin(), h.end(), "provider") != h.end();

  if (has && !by_provider) {
    spec.x_label = "-R+";
    spec.y_label = "R-";
    std::vector<ParetoPoint> points;
    for (std::size_t r = 0; r < table.rows.size(); ++r)
      points.push_back({table.number(r, "tau"), table.number(r, "r_plus"), table.number(r, "r_minus")});
    PlotSeries sweep{"sweep", {}, {}, true};
    for (const auto& p : points) {
      sweep.x.push_back(-p.r_plus);
      sweep.y.push_back(p.r_minus);
    }
    PlotSeries front{"frontier", {}, {}, false};
    for (const auto& p : pareto_frontier(points)) {
      front.x.push_back(-p.r_plus);
      front.y.push_back(p.r_minus);
    }
    spec.series = {std::move(sweep), std::move(front)};
    return spec;
  }

  std::size_t x_col = 0;
  if (by_provider) x_col = table.column("tau");
  if (!numeric_column(table, x_col)) throw std::invalid_argument("CSV '" + title + "': first column is not numeric");
  spec.x_label = h[x_col];
  spec.y_label = "value";
  std::map<std::string, PlotSeries> groups;
  std::vector<std::string> order;
  for (std::size_t c = 0; c < h.size(); ++c) {
    if (c == x_col || (by_provider && h[c] == "provider") || skipped(h[c]) || !numeric_column(table, c)) continue;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      const std::string name = by_provider ? table.rows[r][table.column("provider")] + " " + h[c] : h[c];
      if (!groups.count(name)) {
        order.push_back(name);
        groups[name].name = name;
      }
      groups[name].x.push_back(std::strtod(table.rows[r][x_col].c_str(), nullptr));
      groups[name].y.push_back(std::strtod(table.rows[r][c].c_str(), nullptr));
    }
  }
  for (const auto& name : order) spec.series.push_back(std::move(groups[name]));
  if (spec.series.empty()) throw std::invalid_argument("CSV '" + title + "' has no numeric series");
  return spec;
}

std::vector<std::string> emit_plots(const std::vector<std::string>& csv_paths) {
  std::vector<std::string> out;
  for (const auto& path : csv_paths) {
    const std::filesystem::path p(path);
    const CsvTable table = read_csv(path);
    const std::string svg = render_svg(plot_for_csv(table, p.stem().string()));
    auto svg_path = p;
    svg_path.replace_extension(".svg");
    write_text(svg_path.string(), svg);
    out.push_back(svg_path.string());
  }
  return out;
}

}  // namespace semcom
