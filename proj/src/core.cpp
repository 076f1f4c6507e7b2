#include "fluscan/core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fluscan {

namespace {

bool leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int y, int m) {
  static const int d[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (m == 2 && leap(y)) return 29;
  return d[m - 1];
}

}  // namespace

bool DayStamp::valid() const {
  if (month < 1 || month > 12) return false;
  if (day < 1 || day > days_in_month(year, month)) return false;
  return true;
}

// civil <-> day count (Howard Hinnant's algorithms)
std::int64_t DayStamp::to_days() const {
  int y = year;
  const int m = month, d = day;
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

DayStamp DayStamp::from_days(std::int64_t z) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp + (mp < 10 ? 3 : -9);
  return DayStamp{static_cast<int>(y + (m <= 2)), static_cast<int>(m),
                  static_cast<int>(d)};
}

std::string DayStamp::to_string() const {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
  return buf;
}

std::optional<DayStamp> DayStamp::parse(std::string_view iso) {
  if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-') return std::nullopt;
  auto num = [&](int pos, int len, int& out) {
    auto [p, ec] = std::from_chars(iso.data() + pos, iso.data() + pos + len, out);
    return ec == std::errc() && p == iso.data() + pos + len;
  };
  DayStamp d;
  if (!num(0, 4, d.year) || !num(5, 2, d.month) || !num(8, 2, d.day))
    return std::nullopt;
  if (!d.valid()) return std::nullopt;
  return d;
}

DayStamp add_days(DayStamp d, std::int64_t n) {
  return DayStamp::from_days(d.to_days() + n);
}

std::int64_t week_index(DayStamp day, DayStamp season_start) {
  const std::int64_t delta = day.to_days() - season_start.to_days();
  if (delta < 0)
    throw std::out_of_range("date " + day.to_string() +
                            " is earlier than season start " +
                            season_start.to_string());
  return delta / 7;
}

void IliSeries::validate() const {
  for (std::size_t i = 0; i < values.size(); ++i)
    if (!(values[i] >= 0.0))
      throw std::invalid_argument("ILI series value at week " +
                                  std::to_string(i) + " is negative");
}

void IliSeries::write_csv(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "week,score\n";
  char buf[40];
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", values[i]);
    out << i << ',' << buf << '\n';
  }
}

IliSeries IliSeries::load_csv(const std::string& path, DayStamp season_start) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("week,score", 0) != 0)
    throw std::runtime_error(path + ": expected header 'week,score'");
  IliSeries s;
  s.season_start = season_start;
  std::size_t expect = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error(path + ": malformed row '" + line + "'");
    std::size_t week = 0;
    auto [p1, e1] = std::from_chars(line.data(), line.data() + comma, week);
    double score = 0.0;
    auto [p2, e2] = std::from_chars(line.data() + comma + 1,
                                    line.data() + line.size(), score);
    if (e1 != std::errc() || e2 != std::errc() || p1 != line.data() + comma ||
        p2 != line.data() + line.size())
      throw std::runtime_error(path + ": malformed row '" + line + "'");
    if (week != expect)
      throw std::runtime_error(path + ": week indices must be dense from 0");
    ++expect;
    s.values.push_back(score);
  }
  s.validate();
  return s;
}

DailyCounters::DailyCounters(std::vector<std::string> term_names)
    : names_(std::move(term_names)) {}

std::uint64_t DailyCounters::key(std::int64_t epoch_day, int term) {
  // epoch day fits comfortably in 40 bits for any sane date
  return (static_cast<std::uint64_t>(epoch_day + (1ll << 39)) << 24) |
         static_cast<std::uint32_t>(term);
}

void DailyCounters::add(DayStamp day, int term, std::int64_t n) {
  if (term < 0 || term >= term_count())
    throw std::out_of_range("term id out of range");
  if (n < 0) throw std::invalid_argument("negative count");
  if (n == 0) return;
  counts_[key(day.to_days(), term)] += n;
}

std::int64_t DailyCounters::at(DayStamp day, int term) const {
  auto it = counts_.find(key(day.to_days(), term));
  return it == counts_.end() ? 0 : it->second;
}

std::int64_t DailyCounters::total() const {
  std::int64_t t = 0;
  for (const auto& [k, v] : counts_) t += v;
  return t;
}

std::optional<DayStamp> DailyCounters::min_day() const {
  if (counts_.empty()) return std::nullopt;
  std::uint64_t best = UINT64_MAX;
  for (const auto& [k, v] : counts_) best = std::min(best, k);
  return DayStamp::from_days(static_cast<std::int64_t>(best >> 24) - (1ll << 39));
}

std::optional<DayStamp> DailyCounters::max_day() const {
  if (counts_.empty()) return std::nullopt;
  std::uint64_t best = 0;
  for (const auto& [k, v] : counts_) best = std::max(best, k);
  return DayStamp::from_days(static_cast<std::int64_t>(best >> 24) - (1ll << 39));
}

void DailyCounters::write_csv(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "date,term,count\n";
  std::vector<std::uint64_t> keys;
  keys.reserve(counts_.size());
  for (const auto& [k, v] : counts_) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  for (const auto k : keys) {
    const auto day =
        DayStamp::from_days(static_cast<std::int64_t>(k >> 24) - (1ll << 39));
    const int term = static_cast<int>(k & 0xFFFFFF);
    out << day.to_string() << ',' << names_[term] << ','
        << counts_.at(k) << '\n';
  }
}

DailyCounters DailyCounters::load_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("date,term,count", 0) != 0)
    throw std::runtime_error(path + ": expected header 'date,term,count'");
  DailyCounters c;
  std::unordered_map<std::string, int> ids;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 == std::string::npos ? 0 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
      throw std::runtime_error(path + ": malformed row '" + line + "'");
    const auto date = DayStamp::parse(line.substr(0, c1));
    if (!date) throw std::runtime_error(path + ": bad date in '" + line + "'");
    const std::string term = line.substr(c1 + 1, c2 - c1 - 1);
    std::int64_t n = 0;
    auto [p, ec] =
        std::from_chars(line.data() + c2 + 1, line.data() + line.size(), n);
    if (ec != std::errc() || p != line.data() + line.size() || n < 0)
      throw std::runtime_error(path + ": bad count in '" + line + "'");
    auto [it, inserted] = ids.try_emplace(term, c.term_count());
    if (inserted) c.names_.push_back(term);
    c.add(*date, it->second, n);
  }
  return c;
}

IliSeries aggregate_weekly(const std::map<DayStamp, double>& daily_scores,
                           DayStamp season_start) {
  IliSeries out;
  out.season_start = season_start;
  if (daily_scores.empty()) return out;

  std::int64_t last_week = 0;
  for (const auto& [day, score] : daily_scores) {
    if (score < 0.0)
      throw std::invalid_argument("negative daily score on " + day.to_string());
    last_week = std::max(last_week, week_index(day, season_start));
  }
  std::vector<double> sums(static_cast<std::size_t>(last_week) + 1, 0.0);
  for (const auto& [day, score] : daily_scores)
    sums[static_cast<std::size_t>(week_index(day, season_start))] += score;

  out.values.resize(sums.size());
  for (std::size_t w = 0; w < sums.size(); ++w)
    out.values[w] = std::floor(sums[w] + 0.5);  // round half-up
  return out;
}

}  // namespace fluscan
