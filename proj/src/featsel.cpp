#include "fluscan/featsel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "fluscan/kernels.hpp"

namespace fluscan::featsel {

double pearson_r(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw std::invalid_argument("pearson_r: length mismatch (" +
                                std::to_string(x.size()) + " vs " +
                                std::to_string(y.size()) + ")");
  const std::size_t n = x.size();
  if (n < 2) throw std::invalid_argument("pearson_r: need at least 2 samples");
  const auto& k = kernels::active();
  const double mx = k.sum(x.data(), n) / static_cast<double>(n);
  const double my = k.sum(y.data(), n) / static_cast<double>(n);
  const double sxx = k.sumsq_centered(x.data(), mx, n);
  const double syy = k.sumsq_centered(y.data(), my, n);
  if (sxx == 0.0)
    throw std::invalid_argument("pearson_r: first series has zero variance");
  if (syy == 0.0)
    throw std::invalid_argument("pearson_r: second series has zero variance");
  const double sxy = k.dot_centered(x.data(), mx, y.data(), my, n);
  const double r = sxy / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

Ranking rank_terms(const Matrix& weekly_term_counts, const IliSeries& ili) {
  const std::size_t n = weekly_term_counts.rows;
  if (n != ili.size())
    throw std::invalid_argument(
        "rank_terms: matrix has " + std::to_string(n) + " weeks but ILI has " +
        std::to_string(ili.size()));
  if (n < 2) throw std::invalid_argument("rank_terms: need at least 2 weeks");

  Ranking out;
  std::vector<double> column(n);
  for (std::size_t j = 0; j < weekly_term_counts.cols; ++j) {
    for (std::size_t w = 0; w < n; ++w) column[w] = weekly_term_counts.at(w, j);
    const double first = column[0];
    const bool constant =
        std::all_of(column.begin(), column.end(),
                    [first](double v) { return v == first; });
    if (constant) {
      out.skipped.push_back(static_cast<int>(j));
      continue;
    }
    TermScore s;
    s.term = static_cast<int>(j);
    s.pearson_r = pearson_r(column, ili.values);
    s.n_weeks = n;
    out.ranked.push_back(s);
  }
  std::stable_sort(out.ranked.begin(), out.ranked.end(),
                   [](const TermScore& a, const TermScore& b) {
                     if (a.pearson_r != b.pearson_r)
                       return a.pearson_r > b.pearson_r;
                     return a.term < b.term;
                   });
  return out;
}

std::vector<int> select_terms(const std::vector<TermScore>& ranked, int k) {
  if (k < 1) throw std::invalid_argument("select_terms: k must be >= 1");
  std::vector<int> out;
  for (const auto& s : ranked) {
    if (static_cast<int>(out.size()) >= k) break;
    out.push_back(s.term);
  }
  return out;
}

Matrix weekly_term_counts(const DailyCounters& counters, DayStamp season_start,
                          std::size_t n_weeks) {
  Matrix m(n_weeks, static_cast<std::size_t>(counters.term_count()));
  const std::int64_t n_days = static_cast<std::int64_t>(n_weeks) * 7;
  if (const auto last = counters.max_day()) {
    const std::int64_t w = week_index(*last, season_start);
    if (w >= static_cast<std::int64_t>(n_weeks))
      throw std::out_of_range("counter date " + last->to_string() +
                              " falls outside the " + std::to_string(n_weeks) +
                              "-week range");
  }
  if (const auto first = counters.min_day()) week_index(*first, season_start);
  for (std::int64_t d = 0; d < n_days; ++d) {
    const DayStamp day = add_days(season_start, d);
    const std::size_t w = static_cast<std::size_t>(d / 7);
    for (int t = 0; t < counters.term_count(); ++t)
      m.at(w, static_cast<std::size_t>(t)) +=
          static_cast<double>(counters.at(day, t));
  }
  return m;
}

void write_ranking_csv(const std::string& path, const Ranking& ranking,
                       const std::vector<std::string>& term_names) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "term,pearson_r,n_weeks\n";
  char buf[40];
  for (const auto& s : ranking.ranked) {
    std::snprintf(buf, sizeof(buf), "%.10f", s.pearson_r);
    out << term_names.at(static_cast<std::size_t>(s.term)) << ',' << buf << ','
        << s.n_weeks << '\n';
  }
  out << "skipped\n";
  for (const int t : ranking.skipped)
    out << term_names.at(static_cast<std::size_t>(t)) << '\n';
}

void write_features_csv(const std::string& path, const Matrix& features,
                        const std::vector<std::string>& term_names) {
  if (term_names.size() != features.cols)
    throw std::invalid_argument("write_features_csv: name/column mismatch");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "week";
  for (const auto& n : term_names) out << ',' << n;
  out << '\n';
  char buf[40];
  for (std::size_t w = 0; w < features.rows; ++w) {
    out << w;
    for (std::size_t j = 0; j < features.cols; ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", features.at(w, j));
      out << ',' << buf;
    }
    out << '\n';
  }
}

}  // namespace fluscan::featsel
