#include <algorithm>
#include <filesystem>
#include <map>
#include <random>

#include "doctest.h"
#include "fluscan/core.hpp"

using namespace fluscan;

TEST_SUITE_BEGIN("core");

TEST_CASE("DayStamp round-trips through day counts and ISO strings") {
  const DayStamp d{2019, 8, 23};
  CHECK(d.to_string() == "2019-08-23");
  CHECK(DayStamp::from_days(d.to_days()) == d);
  CHECK(DayStamp::parse("2019-08-23") == d);
  CHECK(add_days(d, 10) == DayStamp{2019, 9, 2});
  CHECK(!DayStamp::parse("2019-02-30"));
  CHECK(!DayStamp::parse("2019-8-23"));
  CHECK(DayStamp::parse("2020-02-29").has_value());  // leap day

  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::int64_t> days(-100000, 100000);
  for (int i = 0; i < 2000; ++i) {
    const std::int64_t z = days(rng);
    const DayStamp s = DayStamp::from_days(z);
    CHECK(s.valid());
    CHECK(s.to_days() == z);
  }
}

TEST_CASE("week_index maps day d to floor((d - start)/7)") {
  const DayStamp start{2019, 6, 3};
  CHECK(week_index(start, start) == 0);
  CHECK(week_index(add_days(start, 6), start) == 0);
  CHECK(week_index(add_days(start, 7), start) == 1);
  CHECK(week_index(add_days(start, 27), start) == 3);
  CHECK_THROWS_AS(week_index(add_days(start, -1), start), std::out_of_range);
}

TEST_CASE("aggregate_weekly sums 7-day blocks with half-up rounding") {
  const DayStamp start{2019, 6, 3};

  SUBCASE("seven unit days make one week of 7") {
    std::map<DayStamp, double> daily;
    for (int i = 0; i < 7; ++i) daily[add_days(start, i)] = 1.0;
    const auto s = aggregate_weekly(daily, start);
    REQUIRE(s.size() == 1);
    CHECK(s.values[0] == 7.0);
  }

  SUBCASE("empty input gives a length-0 series") {
    const auto s = aggregate_weekly({}, start);
    CHECK(s.size() == 0);
  }

  SUBCASE("exact .5 sums round up") {
    std::map<DayStamp, double> daily;
    daily[start] = 2.5;
    daily[add_days(start, 7)] = 3.5;
    const auto s = aggregate_weekly(daily, start);
    REQUIRE(s.size() == 2);
    CHECK(s.values[0] == 3.0);
    CHECK(s.values[1] == 4.0);
  }

  SUBCASE("fourteen days of 0.4 give [3, 3]") {
    std::map<DayStamp, double> daily;
    for (int i = 0; i < 14; ++i) daily[add_days(start, i)] = 0.4;
    const auto s = aggregate_weekly(daily, start);
    REQUIRE(s.size() == 2);
    CHECK(s.values[0] == 3.0);  // 2.8 rounds half-up to 3
    CHECK(s.values[1] == 3.0);
  }

  SUBCASE("weeks without data inside the range are zero") {
    std::map<DayStamp, double> daily;
    daily[start] = 1.0;
    daily[add_days(start, 15)] = 2.0;  // week 2
    const auto s = aggregate_weekly(daily, start);
    REQUIRE(s.size() == 3);
    CHECK(s.values[0] == 1.0);
    CHECK(s.values[1] == 0.0);
    CHECK(s.values[2] == 2.0);
  }

  SUBCASE("a date before season start raises a range error naming it") {
    std::map<DayStamp, double> daily;
    daily[add_days(start, -2)] = 1.0;
    try {
      aggregate_weekly(daily, start);
      FAIL("expected out_of_range");
    } catch (const std::out_of_range& e) {
      CHECK(std::string(e.what()).find("2019-06-01") != std::string::npos);
    }
  }

  SUBCASE("negative daily scores are rejected") {
    std::map<DayStamp, double> daily;
    daily[start] = -0.5;
    CHECK_THROWS_AS(aggregate_weekly(daily, start), std::invalid_argument);
  }

  SUBCASE("integer inputs aggregate exactly: sum(weekly) == sum(daily)") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> score(0, 20), span(0, 90);
    std::map<DayStamp, double> daily;
    double total = 0;
    for (int i = 0; i < 60; ++i) {
      const double v = score(rng);
      daily[add_days(start, span(rng))] += v;
      total += v;
    }
    const auto s = aggregate_weekly(daily, start);
    double wsum = 0;
    for (const double v : s.values) wsum += v;
    CHECK(wsum == total);
  }
}

TEST_CASE("IliSeries CSV round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "fluscan_core_test";
  std::filesystem::create_directories(dir);
  IliSeries s;
  s.season_start = DayStamp{2019, 6, 3};
  s.values = {0, 3, 7.25, 41, 12};
  const auto path = (dir / "ili.csv").string();
  s.write_csv(path);
  const auto back = IliSeries::load_csv(path, s.season_start);
  CHECK(back.values == s.values);
  std::filesystem::remove_all(dir);
}

TEST_CASE("DailyCounters stores sparse counts and round-trips CSV") {
  DailyCounters c({"γριπη", "βηχας"});
  const DayStamp d{2019, 8, 23};
  c.add(d, 0, 3);
  c.add(add_days(d, 1), 1, 2);
  c.add(d, 0, 1);
  CHECK(c.at(d, 0) == 4);
  CHECK(c.at(d, 1) == 0);
  CHECK(c.total() == 6);
  CHECK(c.min_day() == d);
  CHECK(c.max_day() == add_days(d, 1));
  CHECK_THROWS(c.add(d, 7, 1));

  const auto dir = std::filesystem::temp_directory_path() / "fluscan_core_test2";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "counters.csv").string();
  c.write_csv(path);
  const auto back = DailyCounters::load_csv(path);
  CHECK(back.at(d, 0) == 4);
  CHECK(back.total() == 6);
  CHECK(back.term_names() == std::vector<std::string>{"γριπη", "βηχας"});
  std::filesystem::remove_all(dir);
}

TEST_SUITE_END();
