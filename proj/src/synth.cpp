#include "fluscan/synth.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "json.hpp"

namespace fluscan::synth {

void SeasonSpec::validate() const {
  if (n_weeks < 1) throw std::invalid_argument("season needs >= 1 week");
  int prev = 0;
  for (const int b : boundaries) {
    if (b <= prev || b >= n_weeks)
      throw std::invalid_argument(
          "phase boundaries must be strictly increasing interior weeks");
    prev = b;
  }
  if (!(phase_means[0] <= phase_means[1] && phase_means[1] <= phase_means[2] &&
        phase_means[2] >= phase_means[3] && phase_means[3] >= phase_means[4]))
    throw std::invalid_argument("phase means violate the unimodal ordering");
  if (noise_sd < 0.0) throw std::invalid_argument("noise_sd must be >= 0");
}

Season generate_season(const SeasonSpec& spec, DayStamp season_start) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  Season s;
  s.series.season_start = season_start;
  s.series.values.resize(static_cast<std::size_t>(spec.n_weeks));
  s.phases.resize(static_cast<std::size_t>(spec.n_weeks));
  for (int t = 0; t < spec.n_weeks; ++t) {
    int phase = 1;
    for (const int b : spec.boundaries) phase += (b <= t) ? 1 : 0;
    s.phases[static_cast<std::size_t>(t)] = phase;
    double v = spec.phase_means[static_cast<std::size_t>(phase - 1)];
    if (spec.noise_sd > 0.0) v += spec.noise_sd * noise(rng);
    s.series.values[static_cast<std::size_t>(t)] =
        std::max(0.0, std::floor(v + 0.5));
  }
  return s;
}

Matrix generate_corpus(const IliSeries& season,
                       const textnorm::TermLexicon& lexicon,
                       const std::vector<TermRates>& rates, std::uint64_t seed,
                       std::ostream& out) {
  if (rates.size() != static_cast<std::size_t>(lexicon.size()))
    throw std::invalid_argument("one rate entry per lexicon term required");
  for (const auto& r : rates)
    if (r.base < 0.0 || r.slope < 0.0)
      throw std::invalid_argument("rates must be nonnegative");

  std::mt19937_64 rng(seed);
  const std::int64_t n_days = static_cast<std::int64_t>(season.size()) * 7;
  Matrix planted(static_cast<std::size_t>(n_days),
                 static_cast<std::size_t>(lexicon.size()));
  std::uint64_t serial = 0;
  for (std::int64_t d = 0; d < n_days; ++d) {
    const DayStamp day = add_days(season.season_start, d);
    const double daily_ili =
        season.values[static_cast<std::size_t>(d / 7)] / 7.0;
    const std::string stamp = day.to_string() + "T12:00:00Z";
    for (int term = 0; term < lexicon.size(); ++term) {
      const auto& rate = rates[static_cast<std::size_t>(term)];
      const double lambda = rate.base + rate.slope * daily_ili;
      long n = 0;
      if (lambda > 0.0) {
        std::poisson_distribution<long> poisson(lambda);
        n = poisson(rng);
      }
      planted.at(static_cast<std::size_t>(d), static_cast<std::size_t>(term)) =
          static_cast<double>(n);
      const auto& variants = lexicon.entry(term).variants;
      for (long i = 0; i < n; ++i) {
        nlohmann::json j;
        j["id"] = "synth-" + std::to_string(serial++);
        j["timestamp"] = stamp;
        j["user"] = "synth";
        j["text"] = variants[static_cast<std::size_t>(i) % variants.size()];
        out << j.dump() << '\n';
      }
    }
  }
  return planted;
}

}  // namespace fluscan::synth
