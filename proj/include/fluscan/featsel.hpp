#ifndef FLUSCAN_FEATSEL_HPP
#define FLUSCAN_FEATSEL_HPP

#include <span>
#include <string>
#include <vector>

#include "fluscan/core.hpp"

namespace fluscan::featsel {

struct TermScore {
  int term = 0;
  double pearson_r = 0.0;
  std::size_t n_weeks = 0;
};

// Sample Pearson correlation. Throws on length mismatch, n < 2, or a
// constant series (zero variance).
double pearson_r(std::span<const double> x, std::span<const double> y);

struct Ranking {
  std::vector<TermScore> ranked;  // descending r, ties by ascending term id
  std::vector<int> skipped;       // zero-variance columns
};

// Scores every column of the weeks-by-terms count matrix against the ILI
// series. Column index doubles as term id. Zero-variance columns are
// skipped, not scored.
Ranking rank_terms(const Matrix& weekly_term_counts, const IliSeries& ili);

// Top-k term ids in rank order (all of them if fewer than k).
std::vector<int> select_terms(const std::vector<TermScore>& ranked, int k);

// Weekly totals per term over the first n_weeks 7-day blocks from
// season_start. Throws if any counter date is outside those weeks.
Matrix weekly_term_counts(const DailyCounters& counters, DayStamp season_start,
                          std::size_t n_weeks);

// CSV with header term,pearson_r,n_weeks, followed by a literal
// 'skipped' line and one term per line.
void write_ranking_csv(const std::string& path, const Ranking& ranking,
                       const std::vector<std::string>& term_names);

// Weekly feature matrix as CSV with header week,<term>,... and one row
// per week.
void write_features_csv(const std::string& path, const Matrix& features,
                        const std::vector<std::string>& term_names);

}  // namespace fluscan::featsel

#endif
