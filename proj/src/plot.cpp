#include "fluscan/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "fluscan/textnorm.hpp"

namespace fluscan::plot {

namespace {

const char* kPhaseColor[fluhmm::kPhases] = {"blue", "orange", "red", "purple",
                                            "green"};

const char* kSeriesPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                                "#bcbd22", "#17becf"};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

std::array<int, fluhmm::kPhases> percent_stack(const double* probs) {
  std::array<int, fluhmm::kPhases> out{};
  std::array<double, fluhmm::kPhases> remainder{};
  int total = 0;
  for (int k = 0; k < fluhmm::kPhases; ++k) {
    const double target = std::max(0.0, probs[k]) * 100.0;
    out[k] = static_cast<int>(std::floor(target));
    remainder[k] = target - out[k];
    total += out[k];
  }
  std::array<int, fluhmm::kPhases> order{};
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return remainder[a] > remainder[b];
  });
  int leftover = 100 - total;
  for (int i = 0; leftover > 0; i = (i + 1) % fluhmm::kPhases, --leftover)
    ++out[order[i]];
  while (leftover < 0) {  // defensive for rows that overshoot 1
    for (int i = fluhmm::kPhases - 1; i >= 0 && leftover < 0; --i)
      if (out[order[i]] > 0) {
        --out[order[i]];
        ++leftover;
      }
  }
  return out;
}

std::string render_fit_svg(const fluhmm::FitResult& fit,
                           const IliSeries& series) {
  const std::size_t T = series.size();
  if (fit.phase_probs.rows != T)
    throw std::invalid_argument("plot: fit covers " +
                                std::to_string(fit.phase_probs.rows) +
                                " weeks but series has " + std::to_string(T));

  const double colw = 30.0, left = 56.0, right = 16.0;
  const double stack_top = 16.0, stack_lh = 10.0;
  const double bar_y = stack_top + 5 * stack_lh + 6.0, bar_h = 10.0;
  const double chart_y = bar_y + bar_h + 12.0, chart_h = 180.0;
  const double axis_y = chart_y + chart_h;
  const double width = left + colw * static_cast<double>(T) + right;
  const double height = axis_y + 34.0;

  double ymax = 1.0;
  for (const double v : series.values) ymax = std::max(ymax, v);

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width)
      << "\" height=\"" << fmt(height) << "\" viewBox=\"0 0 " << fmt(width)
      << " " << fmt(height) << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // percentage stacks, phase 1 on top
  for (std::size_t t = 0; t < T; ++t) {
    const auto stack = percent_stack(fit.phase_probs.row(t));
    const double cx = left + colw * (static_cast<double>(t) + 0.5);
    for (int k = 0; k < fluhmm::kPhases; ++k) {
      svg << "<text class=\"stack\" data-week=\"" << t << "\" data-phase=\""
          << (k + 1) << "\" x=\"" << fmt(cx) << "\" y=\""
          << fmt(stack_top + stack_lh * (k + 1)) << "\" font-size=\"8\" "
          << "text-anchor=\"middle\" fill=\"" << kPhaseColor[k] << "\">"
          << stack[k] << "</text>\n";
    }
  }

  // one bar per week in the color of its most probable phase
  for (std::size_t t = 0; t < T; ++t) {
    const double* row = fit.phase_probs.row(t);
    int best = 0;
    for (int k = 1; k < fluhmm::kPhases; ++k)
      if (row[k] > row[best]) best = k;
    svg << "<rect class=\"phasebar\" data-week=\"" << t << "\" data-phase=\""
        << (best + 1) << "\" x=\"" << fmt(left + colw * t + 1.0) << "\" y=\""
        << fmt(bar_y) << "\" width=\"" << fmt(colw - 2.0) << "\" height=\""
        << fmt(bar_h) << "\" fill=\"" << kPhaseColor[best] << "\"/>\n";
  }

  // axes and weekly score curve
  svg << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(chart_y) << "\" x2=\""
      << fmt(left) << "\" y2=\"" << fmt(axis_y) << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(axis_y) << "\" x2=\""
      << fmt(width - right) << "\" y2=\"" << fmt(axis_y)
      << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double v = ymax * i / 4.0;
    const double y = axis_y - chart_h * i / 4.0;
    svg << "<text x=\"" << fmt(left - 6.0) << "\" y=\"" << fmt(y + 3.0)
        << "\" font-size=\"9\" text-anchor=\"end\">" << fmt(v) << "</text>\n"
        << "<line x1=\"" << fmt(left - 3.0) << "\" y1=\"" << fmt(y)
        << "\" x2=\"" << fmt(left) << "\" y2=\"" << fmt(y)
        << "\" stroke=\"black\"/>\n";
  }
  svg << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" "
         "points=\"";
  for (std::size_t t = 0; t < T; ++t) {
    const double x = left + colw * (static_cast<double>(t) + 0.5);
    const double y = axis_y - chart_h * (series.values[t] / ymax);
    svg << fmt(x) << ',' << fmt(y) << ' ';
  }
  svg << "\"/>\n";
  for (std::size_t t = 0; t < T; ++t) {
    svg << "<text x=\"" << fmt(left + colw * (static_cast<double>(t) + 0.5))
        << "\" y=\"" << fmt(axis_y + 14.0)
        << "\" font-size=\"9\" text-anchor=\"middle\">" << (t + 1)
        << "</text>\n";
  }
  svg << "<text x=\"" << fmt(left + colw * static_cast<double>(T) / 2.0)
      << "\" y=\"" << fmt(axis_y + 28.0)
      << "\" font-size=\"10\" text-anchor=\"middle\">week</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

std::string render_counts_svg(
    const DailyCounters& counters,
    const std::map<std::string, std::string>& labels) {
  if (counters.empty())
    throw std::invalid_argument("plot: no counters to draw");
  const DayStamp from = *counters.min_day();
  const DayStamp to = *counters.max_day();
  const std::int64_t n_days = to.to_days() - from.to_days() + 1;
  const int n_terms = counters.term_count();

  const double left = 46.0, top = 16.0, chart_h = 220.0, day_w = 18.0;
  const double legend_w = 150.0;
  const double axis_y = top + chart_h;
  const double width = left + day_w * static_cast<double>(n_days) + legend_w;
  const double height = axis_y + 40.0;

  std::int64_t cmax = 1;
  for (std::int64_t d = 0; d < n_days; ++d)
    for (int t = 0; t < n_terms; ++t)
      cmax = std::max(cmax, counters.at(add_days(from, d), t));

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width)
      << "\" height=\"" << fmt(height) << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(top) << "\" x2=\""
      << fmt(left) << "\" y2=\"" << fmt(axis_y) << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(axis_y) << "\" x2=\""
      << fmt(left + day_w * static_cast<double>(n_days)) << "\" y2=\""
      << fmt(axis_y) << "\" stroke=\"black\"/>\n";

  for (int t = 0; t < n_terms; ++t) {
    const char* color = kSeriesPalette[t % 10];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
    for (std::int64_t d = 0; d < n_days; ++d) {
      const double x = left + day_w * (static_cast<double>(d) + 0.5);
      const double y =
          axis_y - chart_h * (static_cast<double>(counters.at(add_days(from, d), t)) /
                              static_cast<double>(cmax));
      svg << fmt(x) << ',' << fmt(y) << ' ';
    }
    svg << "\"/>\n";
    const std::string& name = counters.term_names()[static_cast<std::size_t>(t)];
    const auto it = labels.find(name);
    const std::string label = it == labels.end() ? name : it->second;
    const double ly = top + 14.0 * t;
    svg << "<rect x=\"" << fmt(width - legend_w + 4.0) << "\" y=\""
        << fmt(ly - 7.0) << "\" width=\"10\" height=\"10\" fill=\"" << color
        << "\"/>\n<text x=\"" << fmt(width - legend_w + 18.0) << "\" y=\""
        << fmt(ly + 2.0) << "\" font-size=\"10\">" << xml_escape(label)
        << "</text>\n";
  }
  svg << "<text x=\"" << fmt(left) << "\" y=\"" << fmt(axis_y + 16.0)
      << "\" font-size=\"9\">" << from.to_string() << "</text>\n"
      << "<text x=\"" << fmt(left + day_w * static_cast<double>(n_days))
      << "\" y=\"" << fmt(axis_y + 16.0)
      << "\" font-size=\"9\" text-anchor=\"end\">" << to.to_string()
      << "</text>\n</svg>\n";
  return svg.str();
}

std::map<std::string, std::string> load_labels(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open label file " + path);
  std::map<std::string, std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto tab = line.find('\t');
    if (tab == std::string::npos) continue;
    // keys are folded so surface spellings match stored term names
    out[textnorm::normalize(line.substr(0, tab))] = line.substr(tab + 1);
  }
  return out;
}

}  // namespace fluscan::plot
