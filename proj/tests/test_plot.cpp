#include <random>
#include <regex>

#include "doctest.h"
#include "fluscan/plot.hpp"
#include "xml_check.hpp"

using namespace fluscan;
using namespace fluscan::plot;

namespace {

fluhmm::FitResult fake_fit(const std::vector<std::array<double, 5>>& rows) {
  fluhmm::FitResult fit;
  fit.phase_probs = Matrix(rows.size(), 5);
  for (std::size_t t = 0; t < rows.size(); ++t)
    for (int k = 0; k < 5; ++k) fit.phase_probs.at(t, k) = rows[t][k];
  fit.converged = true;
  return fit;
}

IliSeries series_of(std::vector<double> v) {
  IliSeries s;
  s.season_start = DayStamp{2019, 6, 3};
  s.values = std::move(v);
  return s;
}

// stacks grouped by week from the data attributes
std::map<int, std::vector<int>> extract_stacks(const std::string& svg) {
  std::map<int, std::vector<int>> stacks;
  const std::regex re("<text class=\"stack\" data-week=\"(\\d+)\" "
                      "data-phase=\"(\\d)\"[^>]*>(\\d+)</text>");
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), re);
       it != std::sregex_iterator(); ++it)
    stacks[std::stoi((*it)[1])].push_back(std::stoi((*it)[3]));
  return stacks;
}

}  // namespace

TEST_SUITE_BEGIN("plot");

TEST_CASE("largest-remainder stacks always sum to 100") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    std::array<double, 5> p;
    double s = 0.0;
    for (auto& v : p) {
      v = u(rng);
      s += v;
    }
    for (auto& v : p) v /= s;
    const auto stack = percent_stack(p.data());
    int total = 0;
    for (int k = 0; k < 5; ++k) {
      total += stack[k];
      // each entry is within one unit of its exact share
      CHECK(std::abs(stack[k] - p[k] * 100.0) < 1.0);
    }
    CHECK(total == 100);
  }
}

TEST_CASE("one-week certain fit renders a blue bar and a 100/0/0/0/0 stack") {
  const auto fit = fake_fit({{1.0, 0.0, 0.0, 0.0, 0.0}});
  const auto svg = render_fit_svg(fit, series_of({5.0}));
  std::string err;
  CHECK(testing::xml_well_formed(svg, &err));
  CAPTURE(err);
  CHECK(svg.find("<rect class=\"phasebar\" data-week=\"0\" data-phase=\"1\"") !=
        std::string::npos);
  CHECK(svg.find("fill=\"blue\"") != std::string::npos);
  const auto stacks = extract_stacks(svg);
  REQUIRE(stacks.size() == 1);
  CHECK(stacks.at(0) == std::vector<int>{100, 0, 0, 0, 0});
}

TEST_CASE("a 26-week fit renders 26 bars and 26 valid stacks") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::array<double, 5>> rows(26);
  std::vector<double> scores(26);
  for (auto& r : rows) {
    double s = 0.0;
    for (auto& v : r) {
      v = u(rng);
      s += v;
    }
    for (auto& v : r) v /= s;
  }
  for (auto& v : scores) v = 40.0 * u(rng);
  const auto svg = render_fit_svg(fake_fit(rows), series_of(scores));

  std::string err;
  CHECK(testing::xml_well_formed(svg, &err));
  CAPTURE(err);

  std::size_t bars = 0, pos = 0;
  while ((pos = svg.find("<rect class=\"phasebar\"", pos)) != std::string::npos) {
    ++bars;
    ++pos;
  }
  CHECK(bars == 26);
  const auto stacks = extract_stacks(svg);
  REQUIRE(stacks.size() == 26);
  for (const auto& [week, stack] : stacks) {
    REQUIRE(stack.size() == 5);
    int total = 0;
    for (const int v : stack) total += v;
    CAPTURE(week);
    CHECK(total == 100);
  }
}

TEST_CASE("length mismatch is an error") {
  const auto fit = fake_fit({{1, 0, 0, 0, 0}, {1, 0, 0, 0, 0}});
  CHECK_THROWS_AS(render_fit_svg(fit, series_of({1.0})), std::invalid_argument);
}

TEST_CASE("counts chart renders with transliterated legend labels") {
  DailyCounters c({"γριπη", "βηχας"});
  const DayStamp d{2019, 8, 23};
  for (int i = 0; i < 21; ++i) {
    c.add(add_days(d, i), 0, 1 + i % 5);
    c.add(add_days(d, i), 1, 2 + i % 3);
  }
  const auto svg =
      render_counts_svg(c, {{"γριπη", "gripi"}, {"βηχας", "vichas"}});
  std::string err;
  CHECK(testing::xml_well_formed(svg, &err));
  CAPTURE(err);
  CHECK(svg.find(">gripi<") != std::string::npos);
  CHECK(svg.find(">vichas<") != std::string::npos);
}

TEST_SUITE_END();
