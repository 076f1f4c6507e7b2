// fluscan: keyword-stream influenza surveillance pipeline.
//
//   ingest     count lexicon matches per day from a replayed stream
//   select     rank terms by Pearson correlation against weekly ILI
//   train      fit the linear ILI-estimation model
//   estimate   apply the model to daily counters
//   aggregate  sum daily estimates into integer weekly scores
//   fit        fit the 5-phase epidemic HMM to weekly scores
//   plot       render the phase-probability chart (or a counts chart)
//   simulate   generate a synthetic season and tweet stream
//   pipeline   run every stage from a single config file

#include <fstream>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "fluscan/core.hpp"
#include "fluscan/featsel.hpp"
#include "fluscan/fluhmm.hpp"
#include "fluscan/ingest.hpp"
#include "fluscan/kernels.hpp"
#include "fluscan/pipeline.hpp"
#include "fluscan/plot.hpp"
#include "fluscan/regress.hpp"
#include "fluscan/synth.hpp"
#include "fluscan/textnorm.hpp"
#include "json.hpp"

using namespace fluscan;

namespace {

DayStamp parse_date_or_die(const std::string& s, const char* what) {
  const auto d = DayStamp::parse(s);
  if (!d) throw CLI::ValidationError(std::string(what) + ": bad date '" + s + "'");
  return *d;
}

std::map<DayStamp, double> load_daily_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("date,score", 0) != 0)
    throw std::runtime_error(path + ": expected header 'date,score'");
  std::map<DayStamp, double> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    const auto day = DayStamp::parse(line.substr(0, comma));
    if (comma == std::string::npos || !day)
      throw std::runtime_error(path + ": malformed row '" + line + "'");
    out[*day] = std::stod(line.substr(comma + 1));
  }
  return out;
}

void write_daily_csv(const std::string& path,
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

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Twitter-stream ILI surveillance: keyword counting, term "
               "selection, linear estimation, epidemic-phase HMM"};
  app.require_subcommand(1);
  app.fallthrough();  // let --seed/--verbose appear after the subcommand

  bool verbose = false;
  std::uint64_t global_seed = 0;
  bool have_seed = false;
  app.add_flag("--verbose", verbose, "print per-stage summaries");
  app.add_option("--seed", global_seed, "default seed for fit/simulate")
      ->each([&](const std::string&) { have_seed = true; });

  // ---- ingest ----
  auto* c_ingest = app.add_subcommand("ingest", "count term matches per day");
  std::string in_stream, in_lexicon, in_out = "counters.csv";
  c_ingest->add_option("--stream", in_stream, "tweet stream file")->required();
  c_ingest->add_option("--lexicon", in_lexicon, "term lexicon file")->required();
  c_ingest->add_option("--out", in_out, "counter CSV output");
  c_ingest->callback([&] {
    const auto lexicon = textnorm::TermLexicon::load(in_lexicon);
    ingest::ReplayFileSource source(in_stream);
    const auto result = ingest::run_ingest(source, lexicon);
    result.counters.write_csv(in_out);
    if (verbose)
      std::cout << "seen=" << result.summary.tweets_seen
                << " matched=" << result.summary.tweets_matched
                << " occurrences=" << result.summary.counts_added
                << " duplicates=" << result.summary.duplicates
                << " malformed=" << result.summary.malformed << "\n";
  });

  // ---- select ----
  auto* c_select = app.add_subcommand("select", "rank terms by correlation");
  std::string se_counts, se_ili, se_out = "ranking.csv", se_start, se_features;
  int se_k = 10;
  c_select->add_option("--counts", se_counts, "daily counter CSV")->required();
  c_select->add_option("--ili", se_ili, "weekly ILI CSV")->required();
  c_select->add_option("--k", se_k, "terms to keep");
  c_select->add_option("--season-start", se_start,
                       "first day of week 0 (default: first counter date)");
  c_select->add_option("--out", se_out, "ranking CSV output");
  c_select->add_option("--features-out", se_features,
                       "weekly feature CSV for the selected terms");
  c_select->callback([&] {
    const auto counters = DailyCounters::load_csv(se_counts);
    const DayStamp start = se_start.empty()
                               ? counters.min_day().value_or(DayStamp{})
                               : parse_date_or_die(se_start, "--season-start");
    const auto ili = IliSeries::load_csv(se_ili, start);
    const auto weekly = featsel::weekly_term_counts(counters, start, ili.size());
    const auto ranking = featsel::rank_terms(weekly, ili);
    featsel::write_ranking_csv(se_out, ranking, counters.term_names());
    const auto top = featsel::select_terms(ranking.ranked, se_k);
    if (!se_features.empty()) {
      Matrix x(weekly.rows, top.size());
      std::vector<std::string> names;
      for (std::size_t j = 0; j < top.size(); ++j) {
        names.push_back(
            counters.term_names()[static_cast<std::size_t>(top[j])]);
        for (std::size_t w = 0; w < weekly.rows; ++w)
          x.at(w, j) = weekly.at(w, static_cast<std::size_t>(top[j]));
      }
      featsel::write_features_csv(se_features, x, names);
    }
    if (verbose) {
      std::cout << "ranked=" << ranking.ranked.size()
                << " skipped=" << ranking.skipped.size() << " top:";
      for (const int t : top)
        std::cout << ' ' << counters.term_names()[static_cast<std::size_t>(t)];
      std::cout << "\n";
    }
  });

  // ---- train ----
  auto* c_train = app.add_subcommand("train", "fit the linear model");
  std::string tr_features, tr_ili, tr_out = "model.json";
  c_train->add_option("--features", tr_features,
                      "weekly feature CSV (week,term...)")->required();
  c_train->add_option("--ili", tr_ili, "weekly ILI CSV")->required();
  c_train->add_option("--out", tr_out, "model output");
  c_train->callback([&] {
    std::ifstream in(tr_features, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + tr_features);
    std::string header;
    if (!std::getline(in, header) || header.rfind("week", 0) != 0)
      throw std::runtime_error(tr_features + ": expected 'week,...' header");
    std::vector<std::string> names;
    {
      std::size_t pos = header.find(',');
      while (pos != std::string::npos) {
        const auto next = header.find(',', pos + 1);
        names.push_back(header.substr(pos + 1, next == std::string::npos
                                                   ? std::string::npos
                                                   : next - pos - 1));
        pos = next;
      }
    }
    std::vector<double> values;
    std::size_t rows = 0;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::size_t pos = line.find(',');
      std::size_t col = 0;
      while (pos != std::string::npos) {
        const auto next = line.find(',', pos + 1);
        values.push_back(std::stod(line.substr(
            pos + 1, next == std::string::npos ? std::string::npos
                                               : next - pos - 1)));
        pos = next;
        ++col;
      }
      if (col != names.size())
        throw std::runtime_error(tr_features + ": ragged row");
      ++rows;
    }
    Matrix x(rows, names.size());
    x.data = std::move(values);
    const auto ili = IliSeries::load_csv(tr_ili, DayStamp{});
    const auto model = regress::fit_ols(x, ili.values, names);
    model.save(tr_out);
    if (verbose)
      std::cout << "n=" << model.n_samples << " rss=" << model.rss << "\n";
  });

  // ---- estimate ----
  auto* c_est = app.add_subcommand("estimate", "apply the model to counters");
  std::string es_model, es_counts, es_out = "daily_scores.csv";
  c_est->add_option("--model", es_model, "model file")->required();
  c_est->add_option("--counts", es_counts, "daily counter CSV")->required();
  c_est->add_option("--out", es_out, "daily score CSV output");
  c_est->callback([&] {
    const auto model = regress::LinearModel::load(es_model);
    const auto counters = DailyCounters::load_csv(es_counts);
    if (counters.empty()) throw std::runtime_error("no counters to estimate from");
    const auto daily = regress::estimate_daily(
        model, counters, *counters.min_day(), *counters.max_day());
    write_daily_csv(es_out, daily);
    if (verbose) std::cout << daily.size() << " days estimated\n";
  });

  // ---- aggregate ----
  auto* c_agg = app.add_subcommand("aggregate", "sum daily scores per week");
  std::string ag_daily, ag_out = "weekly.csv", ag_start;
  c_agg->add_option("--daily", ag_daily, "daily score CSV")->required();
  c_agg->add_option("--season-start", ag_start,
                    "first day of week 0 (default: first date)");
  c_agg->add_option("--out", ag_out, "weekly CSV output");
  c_agg->callback([&] {
    const auto daily = load_daily_csv(ag_daily);
    if (daily.empty()) throw std::runtime_error(ag_daily + " has no rows");
    const DayStamp start = ag_start.empty()
                               ? daily.begin()->first
                               : parse_date_or_die(ag_start, "--season-start");
    const auto weekly = aggregate_weekly(daily, start);
    weekly.write_csv(ag_out);
    if (verbose) std::cout << weekly.size() << " weeks\n";
  });

  // ---- fit ----
  auto* c_fit = app.add_subcommand("fit", "fit the epidemic-phase HMM");
  std::string fi_ili, fi_out = "fit.json";
  fluhmm::SamplerConfig fit_cfg;
  c_fit->add_option("--ili", fi_ili, "weekly score CSV")->required();
  c_fit->add_option("--chains", fit_cfg.chains, "number of chains");
  c_fit->add_option("--iterations", fit_cfg.initial_iterations,
                    "initial iterations per chain");
  c_fit->add_option("--increment", fit_cfg.increment,
                    "extension size until convergence");
  c_fit->add_option("--max-iterations", fit_cfg.max_iterations,
                    "iteration cap per chain");
  c_fit->add_option("--psrf-threshold", fit_cfg.psrf_threshold,
                    "convergence threshold on the emission-mean PSRF");
  c_fit->add_option("--seed", fit_cfg.seed, "sampler seed");
  c_fit->add_option("--out", fi_out, "fit output (JSON)");
  c_fit->callback([&] {
    if (have_seed && c_fit->count("--seed") == 0) fit_cfg.seed = global_seed;
    const auto ili = IliSeries::load_csv(fi_ili, DayStamp{});
    const auto fit = fluhmm::fit(ili, fit_cfg);
    fit.save(fi_out);
    if (verbose) {
      std::cout << "iterations=" << fit.total_iterations
                << " converged=" << (fit.converged ? "yes" : "no") << " psrf=";
      for (const double p : fit.psrf) std::cout << ' ' << p;
      std::cout << "\n";
    }
  });

  // ---- plot ----
  auto* c_plot = app.add_subcommand("plot", "render SVG charts");
  std::string pl_fit, pl_ili, pl_counts, pl_labels, pl_out = "plot.svg";
  c_plot->add_option("--fit", pl_fit, "fit JSON (phase plot)");
  c_plot->add_option("--ili", pl_ili, "weekly score CSV (phase plot)");
  c_plot->add_option("--counts", pl_counts, "daily counter CSV (counts plot)");
  c_plot->add_option("--labels", pl_labels, "term -> display label map");
  c_plot->add_option("--out", pl_out, "SVG output");
  c_plot->callback([&] {
    std::map<std::string, std::string> labels;
    if (!pl_labels.empty()) labels = plot::load_labels(pl_labels);
    std::string svg;
    if (!pl_fit.empty()) {
      if (pl_ili.empty())
        throw std::runtime_error("--fit requires --ili for the score curve");
      const auto fit = fluhmm::load_fit(pl_fit);
      const auto ili = IliSeries::load_csv(pl_ili, DayStamp{});
      svg = plot::render_fit_svg(fit, ili);
    } else if (!pl_counts.empty()) {
      svg = plot::render_counts_svg(DailyCounters::load_csv(pl_counts), labels);
    } else {
      throw std::runtime_error("need --fit/--ili or --counts");
    }
    std::ofstream out(pl_out, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + pl_out + " for writing");
    out << svg;
  });

  // ---- simulate ----
  auto* c_sim = app.add_subcommand("simulate",
                                   "generate a synthetic season and stream");
  std::string si_config, si_lexicon, si_ili = "season.csv",
              si_phases = "phases.csv", si_stream = "stream.ndjson";
  c_sim->add_option("--config", si_config, "season spec (JSON)")->required();
  c_sim->add_option("--lexicon", si_lexicon, "term lexicon file")->required();
  c_sim->add_option("--ili-out", si_ili, "weekly truth CSV");
  c_sim->add_option("--phases-out", si_phases, "weekly phase truth CSV");
  c_sim->add_option("--stream-out", si_stream, "tweet stream output");
  c_sim->callback([&] {
    std::ifstream in(si_config);
    if (!in) throw std::runtime_error("cannot open " + si_config);
    const nlohmann::json j = nlohmann::json::parse(in);
    synth::SeasonSpec spec;
    spec.n_weeks = j.at("n_weeks").get<int>();
    const auto b = j.at("boundaries").get<std::vector<int>>();
    const auto means = j.at("phase_means").get<std::vector<double>>();
    if (b.size() != 4 || means.size() != 5)
      throw std::runtime_error("need 4 boundaries and 5 phase means");
    std::copy(b.begin(), b.end(), spec.boundaries.begin());
    std::copy(means.begin(), means.end(), spec.phase_means.begin());
    spec.noise_sd = j.value("noise_sd", 0.0);
    spec.seed = j.value("seed", have_seed ? global_seed : std::uint64_t{0});
    const auto start = DayStamp::parse(j.value("season_start", "2019-06-03"));
    if (!start) throw std::runtime_error("bad season_start");

    const auto lexicon = textnorm::TermLexicon::load(si_lexicon);
    std::vector<synth::TermRates> rates(static_cast<std::size_t>(lexicon.size()));
    if (j.contains("rates"))
      for (const auto& r : j["rates"]) {
        const auto id =
            lexicon.lookup(textnorm::normalize(r.at("term").get<std::string>()));
        if (!id)
          throw std::runtime_error("rate for term not in lexicon: " +
                                   r.at("term").get<std::string>());
        rates[static_cast<std::size_t>(*id)] = {r.value("base", 0.0),
                                                r.value("slope", 0.0)};
      }
    const auto season = synth::generate_season(spec, *start);
    season.series.write_csv(si_ili);
    {
      std::ofstream ph(si_phases, std::ios::binary);
      ph << "week,phase\n";
      for (std::size_t t = 0; t < season.phases.size(); ++t)
        ph << t << ',' << season.phases[t] << '\n';
    }
    std::ofstream stream(si_stream, std::ios::binary);
    synth::generate_corpus(season.series, lexicon, rates,
                           j.value("corpus_seed", spec.seed + 1), stream);
    if (verbose)
      std::cout << spec.n_weeks << " weeks -> " << si_stream << "\n";
  });

  // ---- pipeline ----
  auto* c_pipe = app.add_subcommand("pipeline", "run all stages from a config");
  std::string pi_config, pi_out = ".";
  c_pipe->add_option("config", pi_config, "pipeline config (JSON)")->required();
  c_pipe->add_option("--out", pi_out, "artifact directory");
  c_pipe->callback([&] {
    pipeline::run_pipeline(pi_config, pi_out, verbose, std::cout);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const pipeline::StageError& e) {
    std::cerr << "fluscan pipeline: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "fluscan: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
