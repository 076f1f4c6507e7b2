#include "fluscan/fluhmm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <limits>
#include <stdexcept>

#include "fluscan/kernels.hpp"
#include "json.hpp"

namespace fluscan::fluhmm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::mt19937_64 chain_rng(std::uint64_t seed, int chain) {
  return std::mt19937_64(
      splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(chain) + 1)));
}

// Emission probabilities shifted so each week's maximum is 1. A week
// whose log-likelihoods are all non-finite falls back to ones (the model
// then contributes transition information only for that week).
Matrix shifted_emissions(const IliSeries& series, const PhaseModel& model) {
  const std::size_t T = series.size();
  const auto& kern = kernels::active();
  std::array<std::vector<double>, kPhases> col;
  for (int k = 0; k < kPhases; ++k) {
    col[k].resize(T);
    kern.gauss_loglik(series.values.data(), T, model.mu[k], model.sigma[k],
                      col[k].data());
  }
  Matrix e(T, kPhases);
  for (std::size_t t = 0; t < T; ++t) {
    double m = -kInf;
    for (int k = 0; k < kPhases; ++k) m = std::max(m, col[k][t]);
    if (!std::isfinite(m)) {
      for (int k = 0; k < kPhases; ++k) e.at(t, k) = 1.0;
      continue;
    }
    for (int k = 0; k < kPhases; ++k) {
      const double l = col[k][t];
      e.at(t, k) = std::isfinite(l) ? std::exp(l - m) : 0.0;
    }
  }
  return e;
}

// Scaled forward pass; alpha rows are filtered distributions. The start
// is pinned to phase 1. Steps whose reachable mass underflows fall back
// to the transition-only update.
Matrix forward_filter(const Matrix& e, const PhaseModel& model) {
  const std::size_t T = e.rows;
  Matrix alpha(T, kPhases);
  std::array<double, kPhases> stay;
  for (int k = 0; k + 1 < kPhases; ++k) stay[k] = 1.0 - model.advance[k];
  stay[kPhases - 1] = 1.0;

  // the season starts in phase 1, so the filtered distribution at t=0 is
  // a point mass whatever the observation
  alpha.at(0, 0) = 1.0;
  for (std::size_t t = 1; t < T; ++t) {
    std::array<double, kPhases> raw;
    const double* prev = alpha.row(t - 1);
    for (int k = 0; k < kPhases; ++k) {
      double v = prev[k] * stay[k];
      if (k > 0) v += prev[k - 1] * model.advance[k - 1];
      raw[k] = v * e.at(t, k);
    }
    double s = 0.0;
    for (double v : raw) s += v;
    if (s <= 0.0) {
      for (int k = 0; k < kPhases; ++k) {
        double v = prev[k] * stay[k];
        if (k > 0) v += prev[k - 1] * model.advance[k - 1];
        raw[k] = v;
      }
      s = 0.0;
      for (double v : raw) s += v;
      if (s <= 0.0) {
        raw.fill(1.0);
        s = kPhases;
      }
    }
    for (int k = 0; k < kPhases; ++k) alpha.at(t, k) = raw[k] / s;
  }
  return alpha;
}

struct PhaseStats {
  std::array<int, kPhases> n{};
  std::array<double, kPhases> sum{};
};

PhaseStats path_stats(const std::vector<int>& path,
                      const std::vector<double>& y) {
  PhaseStats st;
  for (std::size_t t = 0; t < path.size(); ++t) {
    const int k = path[t] - 1;
    ++st.n[k];
    st.sum[k] += y[t];
  }
  return st;
}

double draw_beta(std::mt19937_64& rng, double a, double b) {
  std::gamma_distribution<double> ga(a, 1.0), gb(b, 1.0);
  const double x = ga(rng), y = gb(rng);
  double v = x / (x + y);
  if (!std::isfinite(v)) v = 0.5;
  return std::clamp(v, 1e-12, 1.0 - 1e-12);
}

struct Chain {
  std::mt19937_64 rng;
  PhaseModel cur;
  std::vector<int> path;
  std::vector<std::array<double, kPhases>> mu_trace;
  std::vector<std::array<double, kPhases>> sigma_trace;
  std::vector<std::array<double, kPhases - 1>> adv_trace;
  std::vector<std::uint8_t> path_trace;  // iteration-major, T entries each
  std::uint64_t order_fallbacks = 0;
};

class Sampler {
 public:
  Sampler(const IliSeries& series, const SamplerConfig& cfg)
      : series_(series), cfg_(cfg) {
    y_min_ = *std::min_element(series.values.begin(), series.values.end());
    y_max_ = *std::max_element(series.values.begin(), series.values.end());
    if (y_max_ - y_min_ < 1.0) {
      // widen the empty-phase mean window for flat data
      y_min_ -= 0.5;
      y_max_ += 0.5;
    }
  }

  void init_chain(Chain& c, int index) {
    const std::size_t T = series_.size();
    c.rng = chain_rng(cfg_.seed, index);
    // random monotone start: four sorted cutpoints, empty phases allowed
    std::uniform_int_distribution<std::size_t> cut(1, T);
    std::array<std::size_t, kPhases - 1> b;
    for (auto& v : b) v = cut(c.rng);
    std::sort(b.begin(), b.end());
    c.path.resize(T);
    for (std::size_t t = 0; t < T; ++t) {
      int phase = 1;
      for (const auto v : b) phase += (v <= t) ? 1 : 0;
      c.path[t] = phase;
    }
    double mean = 0.0;
    for (double v : series_.values) mean += v;
    mean /= static_cast<double>(T);
    double sd = 0.0;
    for (double v : series_.values) sd += (v - mean) * (v - mean);
    sd = std::sqrt(sd / static_cast<double>(T));
    c.cur.sigma.fill(std::max(sd, 0.5));
    draw_means(c);
    draw_sigmas(c);
    draw_advances(c);
  }

  void iterate(Chain& c) {
    const Matrix e = shifted_emissions(series_, c.cur);
    const Matrix alpha = forward_filter(e, c.cur);
    sample_path(c, alpha);
    draw_means(c);
    draw_sigmas(c);
    draw_advances(c);
    c.mu_trace.push_back(c.cur.mu);
    c.sigma_trace.push_back(c.cur.sigma);
    c.adv_trace.push_back(c.cur.advance);
    for (const int p : c.path)
      c.path_trace.push_back(static_cast<std::uint8_t>(p));
  }

 private:
  void sample_path(Chain& c, const Matrix& alpha) {
    const std::size_t T = series_.size();
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    auto pick = [&](const std::array<double, kPhases>& w) {
      double s = 0.0;
      for (double v : w) s += v;
      const double u = unif(c.rng) * s;
      double acc = 0.0;
      for (int k = 0; k < kPhases; ++k) {
        acc += w[k];
        if (u <= acc) return k;
      }
      return kPhases - 1;
    };
    std::array<double, kPhases> w{};
    for (int k = 0; k < kPhases; ++k) w[k] = alpha.at(T - 1, k);
    c.path[T - 1] = pick(w) + 1;
    for (std::size_t t = T - 1; t-- > 0;) {
      const int nxt = c.path[t + 1] - 1;  // 0-based
      w.fill(0.0);
      // reachable predecessors: stay in nxt or advance from nxt-1
      const double stay =
          nxt + 1 < kPhases ? 1.0 - c.cur.advance[nxt] : 1.0;
      w[nxt] = alpha.at(t, nxt) * stay;
      if (nxt > 0) w[nxt - 1] = alpha.at(t, nxt - 1) * c.cur.advance[nxt - 1];
      double s = w[nxt] + (nxt > 0 ? w[nxt - 1] : 0.0);
      if (s <= 0.0) {
        w[nxt] = stay;
        if (nxt > 0) w[nxt - 1] = c.cur.advance[nxt - 1];
      }
      c.path[t] = pick(w) + 1;
    }
  }

  // Joint draw of the five means from their unconstrained conditionals,
  // accepted only when unimodal-ordered; after 100 rejections the draw is
  // sorted into shape (ascending a1..a5 -> a1,a2,a5,a4,a3).
  void draw_means(Chain& c) {
    const PhaseStats st = path_stats(c.path, series_.values);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unif(y_min_, y_max_);
    std::array<double, kPhases> draw{};
    for (int attempt = 0; attempt < 100; ++attempt) {
      for (int k = 0; k < kPhases; ++k) {
        if (st.n[k] > 0) {
          const double mean = st.sum[k] / st.n[k];
          const double sd = c.cur.sigma[k] / std::sqrt(double(st.n[k]));
          draw[k] = mean + sd * normal(c.rng);
        } else {
          draw[k] = unif(c.rng);
        }
      }
      if (PhaseModel::ordered(draw)) {
        c.cur.mu = draw;
        return;
      }
    }
    std::sort(draw.begin(), draw.end());
    c.cur.mu = {draw[0], draw[1], draw[4], draw[3], draw[2]};
    ++c.order_fallbacks;
  }

  void draw_sigmas(Chain& c) {
    const PhaseStats st = path_stats(c.path, series_.values);
    for (int k = 0; k < kPhases; ++k) {
      double ssq = 0.0;
      for (std::size_t t = 0; t < c.path.size(); ++t)
        if (c.path[t] - 1 == k) {
          const double d = series_.values[t] - c.cur.mu[k];
          ssq += d * d;
        }
      const double shape = cfg_.sigma_prior_shape + 0.5 * st.n[k];
      const double rate = cfg_.sigma_prior_scale + 0.5 * ssq;
      std::gamma_distribution<double> gamma(shape, 1.0 / rate);
      const double precision = gamma(c.rng);
      double s = 1.0 / std::sqrt(precision);
      if (!std::isfinite(s)) s = 1e9;
      c.cur.sigma[k] = std::clamp(s, 1e-9, 1e9);
    }
  }

  void draw_advances(Chain& c) {
    std::array<int, kPhases - 1> stays{}, advances{};
    for (std::size_t t = 0; t + 1 < c.path.size(); ++t) {
      const int k = c.path[t] - 1;
      if (k >= kPhases - 1) continue;
      if (c.path[t + 1] == c.path[t])
        ++stays[k];
      else
        ++advances[k];
    }
    for (int k = 0; k < kPhases - 1; ++k)
      c.cur.advance[k] = draw_beta(c.rng, cfg_.advance_prior_a + advances[k],
                                   cfg_.advance_prior_b + stays[k]);
  }

  const IliSeries& series_;
  const SamplerConfig& cfg_;
  double y_min_ = 0.0, y_max_ = 0.0;
};

// PSRF that reports degenerate chains instead of throwing: 1 when both
// within- and between-chain variances vanish, +inf when only the
// within-chain variance does.
double psrf_value(const std::vector<std::vector<double>>& chains) {
  const std::size_t m = chains.size();
  const std::size_t n = chains.front().size();
  std::vector<double> means(m), vars(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& c = chains[i];
    double mu = 0.0;
    for (double v : c) mu += v;
    mu /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : c) ss += (v - mu) * (v - mu);
    means[i] = mu;
    vars[i] = ss / static_cast<double>(n - 1);
  }
  double w = 0.0;
  for (double v : vars) w += v;
  w /= static_cast<double>(m);
  double grand = 0.0;
  for (double v : means) grand += v;
  grand /= static_cast<double>(m);
  double bn = 0.0;  // between-chain variance of the means, B/n
  for (double v : means) bn += (v - grand) * (v - grand);
  bn /= static_cast<double>(m - 1);
  if (w == 0.0) return bn == 0.0 ? 1.0 : kInf;
  const double nn = static_cast<double>(n);
  const double vhat = (nn - 1.0) / nn * w + (1.0 + 1.0 / double(m)) * bn;
  return std::sqrt(vhat / w);
}

}  // namespace

bool PhaseModel::ordered(const std::array<double, kPhases>& mu) {
  return mu[0] <= mu[1] && mu[1] <= mu[2] && mu[2] >= mu[3] && mu[3] >= mu[4];
}

void PhaseModel::validate() const {
  if (!ordered(mu))
    throw std::invalid_argument("phase means violate the unimodal ordering");
  for (double s : sigma)
    if (!(s > 0.0))
      throw std::invalid_argument("phase sd must be positive");
  for (double a : advance)
    if (!(a > 0.0 && a < 1.0))
      throw std::invalid_argument("advance probabilities must be in (0,1)");
}

void SamplerConfig::validate() const {
  if (chains < 2) throw std::invalid_argument("need at least 2 chains");
  if (initial_iterations < 1 || increment < 1)
    throw std::invalid_argument("iteration counts must be >= 1");
  if (max_iterations < initial_iterations)
    throw std::invalid_argument("max_iterations < initial_iterations");
  if (!(burn_in_fraction > 0.0 && burn_in_fraction < 1.0))
    throw std::invalid_argument("burn_in_fraction must be in (0,1)");
  if (!(psrf_threshold > 1.0))
    throw std::invalid_argument("psrf_threshold must exceed 1");
  if (!(sigma_prior_shape > 0.0 && sigma_prior_scale > 0.0))
    throw std::invalid_argument("sigma prior parameters must be positive");
  if (!(advance_prior_a > 0.0 && advance_prior_b > 0.0))
    throw std::invalid_argument("advance prior parameters must be positive");
}

Matrix forward_backward_exact(const IliSeries& series,
                              const PhaseModel& model) {
  if (series.size() == 0)
    throw std::invalid_argument("forward_backward_exact: empty series");
  model.validate();
  const std::size_t T = series.size();
  const Matrix e = shifted_emissions(series, model);
  const Matrix alpha = forward_filter(e, model);

  std::array<double, kPhases> stay;
  for (int k = 0; k + 1 < kPhases; ++k) stay[k] = 1.0 - model.advance[k];
  stay[kPhases - 1] = 1.0;

  Matrix beta(T, kPhases, 1.0);
  for (std::size_t t = T - 1; t-- > 0;) {
    double s = 0.0;
    for (int i = 0; i < kPhases; ++i) {
      double v = stay[i] * e.at(t + 1, i) * beta.at(t + 1, i);
      if (i + 1 < kPhases)
        v += model.advance[i] * e.at(t + 1, i + 1) * beta.at(t + 1, i + 1);
      beta.at(t, i) = v;
      s += v;
    }
    if (s <= 0.0) {
      for (int i = 0; i < kPhases; ++i) beta.at(t, i) = 1.0;
    } else {
      for (int i = 0; i < kPhases; ++i) beta.at(t, i) /= s;
    }
  }

  Matrix gamma(T, kPhases);
  for (std::size_t t = 0; t < T; ++t) {
    double s = 0.0;
    for (int k = 0; k < kPhases; ++k) {
      const double v = alpha.at(t, k) * beta.at(t, k);
      gamma.at(t, k) = v;
      s += v;
    }
    if (s <= 0.0) {
      for (int k = 0; k < kPhases; ++k) gamma.at(t, k) = alpha.at(t, k);
    } else {
      for (int k = 0; k < kPhases; ++k) gamma.at(t, k) /= s;
    }
  }
  return gamma;
}

std::vector<int> ffbs_sample(const IliSeries& series, const PhaseModel& model,
                             std::mt19937_64& rng) {
  if (series.size() == 0)
    throw std::invalid_argument("ffbs_sample: empty series");
  model.validate();
  const std::size_t T = series.size();
  const Matrix e = shifted_emissions(series, model);
  const Matrix alpha = forward_filter(e, model);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<int> path(T);

  auto pick2 = [&](double w0, double w1, int k0, int k1) {
    const double s = w0 + w1;
    if (s <= 0.0) return k1;
    return (unif(rng) * s <= w0) ? k0 : k1;
  };

  {
    // terminal draw from the filtered distribution
    double s = 0.0;
    for (int k = 0; k < kPhases; ++k) s += alpha.at(T - 1, k);
    const double u = unif(rng) * s;
    double acc = 0.0;
    int chosen = kPhases - 1;
    for (int k = 0; k < kPhases; ++k) {
      acc += alpha.at(T - 1, k);
      if (u <= acc) {
        chosen = k;
        break;
      }
    }
    path[T - 1] = chosen + 1;
  }
  for (std::size_t t = T - 1; t-- > 0;) {
    const int nxt = path[t + 1] - 1;
    const double stay = nxt + 1 < kPhases ? 1.0 - model.advance[nxt] : 1.0;
    const double w_stay = alpha.at(t, nxt) * stay;
    const double w_adv =
        nxt > 0 ? alpha.at(t, nxt - 1) * model.advance[nxt - 1] : 0.0;
    if (nxt == 0) {
      path[t] = 1;
      continue;
    }
    path[t] = pick2(w_adv, w_stay, nxt - 1, nxt) + 1;
  }
  return path;
}

double gelman_rubin(const std::vector<std::vector<double>>& chains) {
  if (chains.size() < 2)
    throw std::invalid_argument("gelman_rubin: need at least 2 chains");
  const std::size_t n = chains.front().size();
  if (n < 2)
    throw std::invalid_argument("gelman_rubin: chains must have length >= 2");
  for (const auto& c : chains)
    if (c.size() != n)
      throw std::invalid_argument("gelman_rubin: chains differ in length");
  bool any_var = false;
  for (const auto& c : chains) {
    for (std::size_t i = 1; i < c.size(); ++i)
      if (c[i] != c[0]) {
        any_var = true;
        break;
      }
    if (any_var) break;
  }
  if (!any_var)
    throw std::invalid_argument(
        "gelman_rubin: zero within-chain variance in all chains");
  return psrf_value(chains);
}

FitResult fit(const IliSeries& series, const SamplerConfig& config) {
  config.validate();
  if (series.size() < 5)
    throw std::invalid_argument("fit: need at least 5 weeks of data");
  series.validate();

  const std::size_t T = series.size();
  Sampler sampler(series, config);
  std::vector<Chain> chains(static_cast<std::size_t>(config.chains));
  for (int c = 0; c < config.chains; ++c)
    sampler.init_chain(chains[static_cast<std::size_t>(c)], c);

  auto run_block = [&](Chain& chain, int iters) {
    for (int i = 0; i < iters; ++i) sampler.iterate(chain);
  };

  auto run_all = [&](int iters) {
    if (config.chains == 1) {
      run_block(chains[0], iters);
      return;
    }
    std::vector<std::future<void>> futs;
    futs.reserve(chains.size());
    for (auto& chain : chains)
      futs.push_back(std::async(std::launch::async,
                                [&chain, iters, &run_block] { run_block(chain, iters); }));
    for (auto& f : futs) f.get();
  };

  FitResult result;
  result.config = config;

  int total = 0;
  std::array<double, kPhases> psrf{};
  bool converged = false;
  int next = config.initial_iterations;
  while (true) {
    run_all(next - total);
    total = next;
    // discard the leading burn-in fraction, split each retained segment
    // in half, and compute the PSRF per emission mean over 2*chains parts
    const std::size_t start = static_cast<std::size_t>(
        std::floor(config.burn_in_fraction * static_cast<double>(total)));
    const std::size_t retained = static_cast<std::size_t>(total) - start;
    const std::size_t half = retained / 2;
    converged = true;
    if (half < 2) {
      psrf.fill(kInf);
      converged = false;
      if (total >= config.max_iterations) break;
      next = std::min(total + config.increment, config.max_iterations);
      continue;
    }
    for (int p = 0; p < kPhases; ++p) {
      std::vector<std::vector<double>> seqs;
      seqs.reserve(chains.size() * 2);
      for (const auto& chain : chains) {
        std::vector<double> a(half), b(half);
        for (std::size_t i = 0; i < half; ++i) {
          a[i] = chain.mu_trace[start + i][p];
          b[i] = chain.mu_trace[start + half + i][p];
        }
        seqs.push_back(std::move(a));
        seqs.push_back(std::move(b));
      }
      psrf[p] = psrf_value(seqs);
      if (!(psrf[p] < config.psrf_threshold)) converged = false;
    }
    if (converged || total >= config.max_iterations) break;
    next = std::min(total + config.increment, config.max_iterations);
  }

  result.converged = converged;
  result.total_iterations = total;
  result.psrf = psrf;

  const std::size_t start = static_cast<std::size_t>(
      std::floor(config.burn_in_fraction * static_cast<double>(total)));
  const std::size_t retained = static_cast<std::size_t>(total) - start;

  result.phase_probs = Matrix(T, kPhases);
  std::uint64_t draws = 0;
  for (const auto& chain : chains) {
    result.order_fallbacks += chain.order_fallbacks;
    for (std::size_t it = start; it < static_cast<std::size_t>(total); ++it) {
      const std::uint8_t* p = chain.path_trace.data() + it * T;
      for (std::size_t t = 0; t < T; ++t)
        result.phase_probs.at(t, p[t] - 1) += 1.0;
      ++draws;
    }
  }
  for (std::size_t t = 0; t < T; ++t)
    for (int k = 0; k < kPhases; ++k)
      result.phase_probs.at(t, k) /= static_cast<double>(draws);

  result.param_draws.reserve(chains.size() * retained);
  result.path_draws.reserve(chains.size() * retained * T);
  for (const auto& chain : chains)
    for (std::size_t it = start; it < static_cast<std::size_t>(total); ++it) {
      PhaseModel m;
      m.mu = chain.mu_trace[it];
      m.sigma = chain.sigma_trace[it];
      m.advance = chain.adv_trace[it];
      result.param_draws.push_back(m);
      const std::uint8_t* p = chain.path_trace.data() + it * T;
      result.path_draws.insert(result.path_draws.end(), p, p + T);
    }
  return result;
}

std::array<double, kPhases> FitResult::posterior_mu() const {
  std::array<double, kPhases> out{};
  for (const auto& d : param_draws)
    for (int k = 0; k < kPhases; ++k) out[k] += d.mu[k];
  for (auto& v : out) v /= static_cast<double>(param_draws.size());
  return out;
}

std::array<double, kPhases> FitResult::posterior_sigma() const {
  std::array<double, kPhases> out{};
  for (const auto& d : param_draws)
    for (int k = 0; k < kPhases; ++k) out[k] += d.sigma[k];
  for (auto& v : out) v /= static_cast<double>(param_draws.size());
  return out;
}

std::array<double, kPhases - 1> FitResult::posterior_advance() const {
  std::array<double, kPhases - 1> out{};
  for (const auto& d : param_draws)
    for (int k = 0; k < kPhases - 1; ++k) out[k] += d.advance[k];
  for (auto& v : out) v /= static_cast<double>(param_draws.size());
  return out;
}

void FitResult::save(const std::string& path) const {
  nlohmann::json j;
  j["version"] = 1;
  j["converged"] = converged;
  j["total_iterations"] = total_iterations;
  j["order_fallbacks"] = order_fallbacks;
  j["psrf"] = psrf;
  j["config"] = {{"chains", config.chains},
                 {"initial_iterations", config.initial_iterations},
                 {"increment", config.increment},
                 {"max_iterations", config.max_iterations},
                 {"burn_in_fraction", config.burn_in_fraction},
                 {"psrf_threshold", config.psrf_threshold},
                 {"seed", config.seed},
                 {"sigma_prior_shape", config.sigma_prior_shape},
                 {"sigma_prior_scale", config.sigma_prior_scale},
                 {"advance_prior_a", config.advance_prior_a},
                 {"advance_prior_b", config.advance_prior_b}};
  if (!param_draws.empty()) {
    j["posterior_means"] = {{"mu", posterior_mu()},
                            {"sigma", posterior_sigma()},
                            {"advance", posterior_advance()}};
  }
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t t = 0; t < phase_probs.rows; ++t) {
    nlohmann::json row = nlohmann::json::array();
    for (int k = 0; k < kPhases; ++k) row.push_back(phase_probs.at(t, k));
    rows.push_back(std::move(row));
  }
  j["phase_probs"] = std::move(rows);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << j.dump(2) << '\n';
}

FitResult load_fit(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open fit file " + path);
  nlohmann::json j = nlohmann::json::parse(in);
  if (!j.contains("version") || j["version"].get<int>() != 1)
    throw std::runtime_error(path + ": unsupported fit version");
  FitResult r;
  r.converged = j.value("converged", false);
  r.total_iterations = j.value("total_iterations", std::int64_t{0});
  r.order_fallbacks = j.value("order_fallbacks", std::uint64_t{0});
  if (j.contains("psrf")) {
    const auto& v = j["psrf"];
    for (std::size_t k = 0; k < v.size() && k < kPhases; ++k)
      // non-finite PSRF values serialize as null
      r.psrf[k] = v[k].is_number() ? v[k].get<double>() : kInf;
  }
  const auto rows = j.at("phase_probs");
  r.phase_probs = Matrix(rows.size(), kPhases);
  for (std::size_t t = 0; t < rows.size(); ++t)
    for (int k = 0; k < kPhases; ++k)
      r.phase_probs.at(t, k) = rows[t][k].get<double>();
  return r;
}

}  // namespace fluscan::fluhmm
