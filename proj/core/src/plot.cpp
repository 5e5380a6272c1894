#include "exo/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>

#include "exo/errors.hpp"
#include "exo/evaluation.hpp"
#include "exo/records.hpp"

namespace exo {

namespace {

constexpr double kWidth = 760, kHeight = 460;
constexpr double kLeft = 80, kRight = 180, kTop = 40, kBottom = 60;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
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

double metric_value(const RunRecord& r, Metric m) {
  switch (m) {
    case Metric::instant_regret: return r.instant_regret;
    case Metric::cumulative_regret: return r.cumulative_regret;
    case Metric::model_error: return r.model_error;
  }
  return 0.0;
}

// Round step to 1, 2 or 5 times a power of ten.
double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double f = raw / mag;
  return (f < 1.5 ? 1 : f < 3.5 ? 2 : f < 7.5 ? 5 : 10) * mag;
}

}  // namespace

const char* metric_name(Metric m) noexcept {
  switch (m) {
    case Metric::instant_regret: return "instant_regret";
    case Metric::cumulative_regret: return "cumulative_regret";
    case Metric::model_error: return "model_error";
  }
  return "metric";
}

std::vector<Series> aggregate(const std::vector<RunRecord>& records, Metric metric) {
  std::map<std::string, std::map<int, std::vector<double>>> grouped;
  for (const auto& r : records) grouped[r.algorithm][r.episode].push_back(metric_value(r, metric));
  std::vector<Series> out;
  for (auto& [label, by_episode] : grouped) {
    Series s{label, {}};
    for (auto& [episode, xs] : by_episode) {
      const MeanWithError m = mean_and_se(xs);
      s.points.push_back({episode, m.mean, m.se});
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::string render_svg(const std::vector<Series>& series, const std::string& title, const std::string& y_label) {
  double x_lo = INFINITY, x_hi = -INFINITY, y_lo = INFINITY, y_hi = -INFINITY;
  for (const auto& s : series) {
    for (const auto& p : s.points) {
      x_lo = std::min(x_lo, double(p.episode));
      x_hi = std::max(x_hi, double(p.episode));
      y_lo = std::min(y_lo, p.mean - p.se);
      y_hi = std::max(y_hi, p.mean + p.se);
    }
  }
  if (!std::isfinite(x_lo)) x_lo = 0, x_hi = 1, y_lo = 0, y_hi = 1;
  if (x_hi <= x_lo) x_hi = x_lo + 1;
  if (y_hi - y_lo < 1e-12) {
    y_lo -= 0.5;
    y_hi += 0.5;
  }
  const double y_step = nice_step(y_hi - y_lo, 6);
  y_lo = std::floor(y_lo / y_step) * y_step;
  y_hi = std::ceil(y_hi / y_step) * y_step;
  const double x_step = nice_step(x_hi - x_lo, 8);

  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * pw; };
  auto sy = [&](double y) { return kTop + (y_hi - y) / (y_hi - y_lo) * ph; };

  std::string o;
  o += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  o += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
       "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" +
       escape(title) + "</text>\n";

  o += "<g stroke=\"#dddddd\">\n";
  for (double y = y_lo; y <= y_hi + y_step * 1e-9; y += y_step) {
    o += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(sy(y)) + "\" x2=\"" + num(kLeft + pw) + "\" y2=\"" +
         num(sy(y)) + "\"/>\n";
  }
  o += "</g>\n<g text-anchor=\"end\">\n";
  for (double y = y_lo; y <= y_hi + y_step * 1e-9; y += y_step) {
    const double v = std::abs(y) < y_step * 1e-9 ? 0.0 : y;
    o += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(sy(y) + 4) + "\">" + num(v) + "</text>\n";
  }
  o += "</g>\n<g text-anchor=\"middle\">\n";
  for (double x = std::ceil(x_lo / x_step) * x_step; x <= x_hi + x_step * 1e-9; x += x_step) {
    o += "<text x=\"" + num(sx(x)) + "\" y=\"" + num(kTop + ph + 18) + "\">" + num(x) + "</text>\n";
  }
  o += "</g>\n";
  o += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(pw) + "\" height=\"" + num(ph) +
       "\" fill=\"none\" stroke=\"black\"/>\n";
  o += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"" + num(kHeight - 18) + "\" text-anchor=\"middle\">episode</text>\n";
  o += "<text transform=\"translate(20," + num(kTop + ph / 2) + ") rotate(-90)\" text-anchor=\"middle\">" +
       escape(y_label) + "</text>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    const char* color = kPalette[i % std::size(kPalette)];
    std::string band, line;
    for (const auto& p : s.points) band += num(sx(p.episode)) + "," + num(sy(p.mean + p.se)) + " ";
    for (auto it = s.points.rbegin(); it != s.points.rend(); ++it) {
      band += num(sx(it->episode)) + "," + num(sy(it->mean - it->se)) + " ";
    }
    for (const auto& p : s.points) line += num(sx(p.episode)) + "," + num(sy(p.mean)) + " ";
    if (!band.empty()) band.pop_back();
    if (!line.empty()) line.pop_back();
    o += "<g class=\"series\" data-label=\"" + escape(s.label) + "\">\n";
    o += "<polygon points=\"" + band + "\" fill=\"" + color + "\" fill-opacity=\"0.2\" stroke=\"none\"/>\n";
    o += "<polyline points=\"" + line + "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.8\"/>\n";
    const double ly = kTop + 16 + 20 * static_cast<double>(i);
    o += "<line x1=\"" + num(kLeft + pw + 14) + "\" y1=\"" + num(ly - 4) + "\" x2=\"" + num(kLeft + pw + 38) +
         "\" y2=\"" + num(ly - 4) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    o += "<text x=\"" + num(kLeft + pw + 44) + "\" y=\"" + num(ly) + "\">" + escape(s.label) + "</text>\n";
    o += "</g>\n";
  }
  o += "</svg>\n";
  return o;
}

std::vector<std::string> render_plots(const std::vector<RunRecord>& records, const std::string& dir) {
  if (records.empty()) throw InvalidInput("render_plots: no records");
  const std::string experiment = records.front().experiment;
  std::vector<std::string> paths;
  for (Metric m : {Metric::instant_regret, Metric::cumulative_regret, Metric::model_error}) {
    const std::string name = metric_name(m);
    const auto path = (std::filesystem::path(dir) / (experiment + "_" + name + ".svg")).string();
    write_text_file(path, render_svg(aggregate(records, m), experiment + ": " + name, name));
    paths.push_back(path);
  }
  return paths;
}

}  // namespace exo
