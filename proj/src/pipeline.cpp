#include "fluscan/pipeline.hpp"

#include <fstream>
#include <map>
#include <optional>
#include <vector>

#include "fluscan/core.hpp"
#include "fluscan/featsel.hpp"
#include "fluscan/fluhmm.hpp"
#include "fluscan/ingest.hpp"
#include "fluscan/plot.hpp"
#include "fluscan/regress.hpp"
#include "fluscan/synth.hpp"
#include "fluscan/textnorm.hpp"
#include "json.hpp"

namespace fluscan::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_daily_scores(const std::string& path,
                        const std::map<DayStamp, double>& scores) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "date,score\n";
  char buf[40];
  for (const auto& [day, score] : scores) {
    std::snprintf(buf, sizeof(buf), "%.17g", score);
    out << day.to_string() << ',' << buf << '\n';
  }
}

struct Config {
  fs::path dir;
  json j;

  std::string output(const std::string& key, const std::string& fallback,
                     const fs::path& out_dir) const {
    std::string name = fallback;
    if (j.contains("outputs") && j["outputs"].contains(key))
      name = j["outputs"][key].get<std::string>();
    return (out_dir / name).string();
  }

  std::string input(const std::string& key) const {
    const fs::path p = j.at(key).get<std::string>();
    return (p.is_absolute() ? p : dir / p).string();
  }
};

fluhmm::SamplerConfig sampler_config(const json& j) {
  fluhmm::SamplerConfig cfg;
  if (!j.contains("fit")) return cfg;
  const auto& f = j["fit"];
  cfg.chains = f.value("chains", cfg.chains);
  cfg.initial_iterations = f.value("initial_iterations", cfg.initial_iterations);
  cfg.increment = f.value("increment", cfg.increment);
  cfg.max_iterations = f.value("max_iterations", cfg.max_iterations);
  cfg.burn_in_fraction = f.value("burn_in_fraction", cfg.burn_in_fraction);
  cfg.psrf_threshold = f.value("psrf_threshold", cfg.psrf_threshold);
  cfg.seed = f.value("seed", cfg.seed);
  cfg.sigma_prior_shape = f.value("sigma_prior_shape", cfg.sigma_prior_shape);
  cfg.sigma_prior_scale = f.value("sigma_prior_scale", cfg.sigma_prior_scale);
  cfg.advance_prior_a = f.value("advance_prior_a", cfg.advance_prior_a);
  cfg.advance_prior_b = f.value("advance_prior_b", cfg.advance_prior_b);
  return cfg;
}

}  // namespace

void run_pipeline(const fs::path& config_path, const fs::path& out_dir,
                  bool verbose, std::ostream& log) {
  Config cfg;
  DayStamp season_start;
  try {
    std::ifstream in(config_path);
    if (!in)
      throw std::runtime_error("cannot open config " + config_path.string());
    cfg.j = json::parse(in);
    cfg.dir = config_path.parent_path();
    const auto start = DayStamp::parse(cfg.j.at("season_start").get<std::string>());
    if (!start) throw std::runtime_error("bad season_start date");
    season_start = *start;
    fs::create_directories(out_dir);
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError("config", e.what());
  }

  auto guard = [](const char* stage, auto&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      throw StageError(stage, e.what());
    }
  };

  // --- simulate (optional) ------------------------------------------------
  std::string stream_path;
  std::optional<IliSeries> simulated;
  const bool have_sim = cfg.j.contains("simulate");
  if (have_sim) {
    guard("simulate", [&] {
      const auto& s = cfg.j["simulate"];
      synth::SeasonSpec spec;
      spec.n_weeks = s.at("n_weeks").get<int>();
      const auto b = s.at("boundaries").get<std::vector<int>>();
      if (b.size() != 4) throw std::runtime_error("need 4 phase boundaries");
      std::copy(b.begin(), b.end(), spec.boundaries.begin());
      const auto means = s.at("phase_means").get<std::vector<double>>();
      if (means.size() != 5) throw std::runtime_error("need 5 phase means");
      std::copy(means.begin(), means.end(), spec.phase_means.begin());
      spec.noise_sd = s.value("noise_sd", 0.0);
      spec.seed = s.value("seed", std::uint64_t{0});

      const auto lexicon = textnorm::TermLexicon::load(cfg.input("lexicon"));
      std::vector<synth::TermRates> rates(
          static_cast<std::size_t>(lexicon.size()));
      if (s.contains("rates"))
        for (const auto& r : s["rates"]) {
          const std::string term =
              textnorm::normalize(r.at("term").get<std::string>());
          const auto id = lexicon.lookup(term);
          if (!id)
            throw std::runtime_error("rate for unknown term '" + term + "'");
          rates[static_cast<std::size_t>(*id)] = {r.value("base", 0.0),
                                                  r.value("slope", 0.0)};
        }

      const auto season = synth::generate_season(spec, season_start);
      season.series.write_csv(cfg.output("season", "season.csv", out_dir));
      {
        std::ofstream ph(cfg.output("phases", "phases.csv", out_dir),
                         std::ios::binary);
        ph << "week,phase\n";
        for (std::size_t t = 0; t < season.phases.size(); ++t)
          ph << t << ',' << season.phases[t] << '\n';
      }
      stream_path = cfg.output("stream", "stream.ndjson", out_dir);
      std::ofstream stream(stream_path, std::ios::binary);
      synth::generate_corpus(season.series, lexicon, rates,
                             s.value("corpus_seed", spec.seed + 1), stream);
      simulated = season.series;
      if (verbose)
        log << "[simulate] " << spec.n_weeks << " weeks -> " << stream_path
            << "\n";
    });
  } else {
    guard("config", [&] { stream_path = cfg.input("stream"); });
  }

  // --- ingest ---------------------------------------------------------
  DailyCounters counters;
  guard("ingest", [&] {
    const auto lexicon = textnorm::TermLexicon::load(cfg.input("lexicon"));
    ingest::ReplayFileSource source(stream_path);
    auto result = ingest::run_ingest(source, lexicon);
    counters = std::move(result.counters);
    counters.write_csv(cfg.output("counters", "counters.csv", out_dir));
    if (verbose)
      log << "[ingest] seen=" << result.summary.tweets_seen
          << " matched=" << result.summary.tweets_matched
          << " occurrences=" << result.summary.counts_added
          << " duplicates=" << result.summary.duplicates
          << " malformed=" << result.summary.malformed << "\n";
  });

  // --- select -----------------------------------------------------------
  IliSeries ili;
  std::vector<int> selected;
  Matrix weekly_counts;
  guard("select", [&] {
    if (cfg.j.contains("ili"))
      ili = IliSeries::load_csv(cfg.input("ili"), season_start);
    else if (simulated)
      ili = *simulated;
    else
      throw std::runtime_error("no 'ili' input and no simulate block");
    weekly_counts = featsel::weekly_term_counts(counters, season_start,
                                                ili.size());
    const auto ranking = featsel::rank_terms(weekly_counts, ili);
    featsel::write_ranking_csv(cfg.output("ranking", "ranking.csv", out_dir),
                               ranking, counters.term_names());
    selected = featsel::select_terms(ranking.ranked, cfg.j.value("k", 10));
    if (selected.empty()) throw std::runtime_error("no usable terms survived");
    if (verbose) {
      log << "[select] kept " << selected.size() << " terms:";
      for (const int t : selected)
        log << ' ' << counters.term_names()[static_cast<std::size_t>(t)];
      log << "\n";
    }
  });

  // --- train -----------------------------------------------------------
  regress::LinearModel model;
  guard("train", [&] {
    Matrix x(weekly_counts.rows, selected.size());
    std::vector<std::string> names;
    for (std::size_t j = 0; j < selected.size(); ++j) {
      names.push_back(
          counters.term_names()[static_cast<std::size_t>(selected[j])]);
      for (std::size_t w = 0; w < weekly_counts.rows; ++w)
        x.at(w, j) = weekly_counts.at(w, static_cast<std::size_t>(selected[j]));
    }
    featsel::write_features_csv(
        cfg.output("features", "weekly_features.csv", out_dir), x, names);
    model = regress::fit_ols(x, ili.values, names);
    model.save(cfg.output("model", "model.json", out_dir));
    if (verbose)
      log << "[train] n=" << model.n_samples << " rss=" << model.rss << "\n";
  });

  // --- estimate ----------------------------------------------------------
  std::map<DayStamp, double> daily;
  guard("estimate", [&] {
    const auto last = counters.max_day();
    if (!last) throw std::runtime_error("no counters to estimate from");
    const std::int64_t weeks = week_index(*last, season_start) + 1;
    daily = regress::estimate_daily(model, counters, season_start,
                                    add_days(season_start, weeks * 7 - 1));
    write_daily_scores(cfg.output("daily_scores", "daily_scores.csv", out_dir),
                       daily);
    if (verbose) log << "[estimate] " << daily.size() << " days\n";
  });

  // --- aggregate ----------------------------------------------------------
  IliSeries weekly;
  guard("aggregate", [&] {
    weekly = aggregate_weekly(daily, season_start);
    weekly.write_csv(cfg.output("weekly", "weekly.csv", out_dir));
    if (verbose) log << "[aggregate] " << weekly.size() << " weeks\n";
  });

  // --- fit ----------------------------------------------------------------
  fluhmm::FitResult fit;
  guard("fit", [&] {
    fit = fluhmm::fit(weekly, sampler_config(cfg.j));
    fit.save(cfg.output("fit", "fit.json", out_dir));
    if (verbose) {
      log << "[fit] iterations=" << fit.total_iterations
          << " converged=" << (fit.converged ? "yes" : "no") << " psrf=";
      for (const double p : fit.psrf) log << ' ' << p;
      log << "\n";
    }
  });

  // --- plot -----------------------------------------------------------
  guard("plot", [&] {
    const std::string svg = plot::render_fit_svg(fit, weekly);
    const std::string path = cfg.output("plot", "plot.svg", out_dir);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << svg;
    if (verbose) log << "[plot] " << path << "\n";
  });
}

}  // namespace fluscan::pipeline
