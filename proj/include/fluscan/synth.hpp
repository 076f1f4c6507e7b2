#ifndef FLUSCAN_SYNTH_HPP
#define FLUSCAN_SYNTH_HPP

#include <array>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "fluscan/core.hpp"
#include "fluscan/textnorm.hpp"

namespace fluscan::synth {

// Season blueprint with known phase boundaries: week t is in phase
// 1 + #{b <= t}. Boundaries are strictly increasing interior weeks.
struct SeasonSpec {
  int n_weeks = 26;
  std::array<int, 4> boundaries{};   // first week of phases 2..5
  std::array<double, 5> phase_means{};  // unimodal-ordered
  double noise_sd = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct Season {
  IliSeries series;
  std::vector<int> phases;  // ground truth, 1..5
};

// Weekly observation = max(0, round(phase mean + Gaussian noise)).
// Deterministic given the spec seed.
Season generate_season(const SeasonSpec& spec, DayStamp season_start);

struct TermRates {
  double base = 0.0;   // expected daily count with no signal
  double slope = 0.0;  // added per unit of daily ILI (weekly value / 7)
};

// Emits a replayable stream of single-keyword tweet records: per day and
// term the count is Poisson with mean base + slope * (weekly ILI / 7),
// cycling through the entry's variants. Returns the planted daily count
// matrix (days x terms) so tests can reconcile ingestion bit-exactly.
Matrix generate_corpus(const IliSeries& season,
                       const textnorm::TermLexicon& lexicon,
                       const std::vector<TermRates>& rates, std::uint64_t seed,
                       std::ostream& out);

}  // namespace fluscan::synth

#endif
