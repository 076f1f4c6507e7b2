#ifndef FLUSCAN_CORE_HPP
#define FLUSCAN_CORE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace fluscan {

// Calendar date, interpreted as a UTC date everywhere.
struct DayStamp {
  int year = 1970;
  int month = 1;  // 1..12
  int day = 1;    // 1..31

  bool valid() const;

  // days since 1970-01-01 (proleptic Gregorian)
  std::int64_t to_days() const;
  static DayStamp from_days(std::int64_t z);

  // ISO-8601 YYYY-MM-DD
  std::string to_string() const;
  static std::optional<DayStamp> parse(std::string_view iso);

  auto operator<=>(const DayStamp&) const = default;
};

DayStamp add_days(DayStamp d, std::int64_t n);

// Week index of `day` relative to `season_start`; weeks are fixed 7-day
// blocks, week w covers days [start + 7w, start + 7w + 6].
// Throws std::out_of_range if day < season_start.
std::int64_t week_index(DayStamp day, DayStamp season_start);

// Weekly nonnegative scores; index i is week i from season_start.
// Length 0 is representable (empty aggregation); consumers impose their
// own minimum-length preconditions.
struct IliSeries {
  DayStamp season_start;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  void validate() const;  // throws on negative values

  void write_csv(const std::string& path) const;  // header: week,score
  static IliSeries load_csv(const std::string& path, DayStamp season_start);
};

// Dense row-major matrix of doubles.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}
  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  const double* row(std::size_t r) const { return data.data() + r * cols; }
  double* row(std::size_t r) { return data.data() + r * cols; }
};

// Per-day, per-term occurrence counts. Term ids are dense from 0 and
// index into term_names(). Absent keys read as 0.
class DailyCounters {
 public:
  DailyCounters() = default;
  explicit DailyCounters(std::vector<std::string> term_names);

  void add(DayStamp day, int term, std::int64_t n);
  std::int64_t at(DayStamp day, int term) const;

  int term_count() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& term_names() const { return names_; }
  std::int64_t total() const;
  bool empty() const { return counts_.empty(); }
  std::optional<DayStamp> min_day() const;
  std::optional<DayStamp> max_day() const;

  // CSV with header date,term,count; rows sorted by (date, term id).
  void write_csv(const std::string& path) const;
  // Rebuilds term ids in order of first appearance in the file.
  static DailyCounters load_csv(const std::string& path);

 private:
  static std::uint64_t key(std::int64_t epoch_day, int term);
  std::vector<std::string> names_;
  std::unordered_map<std::uint64_t, std::int64_t> counts_;
};

// Sums daily scores into 7-day blocks from season_start and rounds each
// week half-up to an integer. Weeks with no data inside the covered range
// get 0; series length = last covered week + 1 (empty input -> length 0).
// Throws std::out_of_range for any date earlier than season_start.
IliSeries aggregate_weekly(const std::map<DayStamp, double>& daily_scores,
                           DayStamp season_start);

}  // namespace fluscan

#endif
