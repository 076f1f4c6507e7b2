#ifndef FLUSCAN_PLOT_HPP
#define FLUSCAN_PLOT_HPP

#include <array>
#include <map>
#include <string>

#include "fluscan/core.hpp"
#include "fluscan/fluhmm.hpp"

namespace fluscan::plot {

// Integer percentages summing to exactly 100 (largest-remainder rounding
// of a probability row).
std::array<int, fluhmm::kPhases> percent_stack(
    const double* probs);

// SVG with the weekly score curve, one bar per week colored by its most
// probable phase (blue/orange/red/purple/green for phases 1..5) and a
// vertical stack of the five rounded phase percentages above each week.
// Throws if the fit and series lengths differ.
std::string render_fit_svg(const fluhmm::FitResult& fit,
                           const IliSeries& series);

// Daily per-term count curves with a legend; `labels` optionally maps
// term names to display labels (e.g. Latin transliterations).
std::string render_counts_svg(const DailyCounters& counters,
                              const std::map<std::string, std::string>& labels);

// term<TAB>label per line, '#' comments.
std::map<std::string, std::string> load_labels(const std::string& path);

}  // namespace fluscan::plot

#endif
