#ifndef FLUSCAN_FLUHMM_HPP
#define FLUSCAN_FLUHMM_HPP

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "fluscan/core.hpp"

namespace fluscan::fluhmm {

// Five ordered epidemic phases: pre-epidemic, growth, plateau, decline,
// post-epidemic. Transitions are strictly left-to-right (stay or advance
// one phase per week, phase 5 absorbing) and every season starts in
// phase 1.
inline constexpr int kPhases = 5;

struct PhaseModel {
  std::array<double, kPhases> mu{};     // emission means, plateau maximal
  std::array<double, kPhases> sigma{};  // emission sd, > 0
  std::array<double, kPhases - 1> advance{};  // P(i -> i+1), in (0,1)

  // mu[0] <= mu[1] <= mu[2] >= mu[3] >= mu[4]
  static bool ordered(const std::array<double, kPhases>& mu);
  void validate() const;
};

struct SamplerConfig {
  int chains = 4;
  int initial_iterations = 5000;
  int increment = 5000;
  int max_iterations = 50000;
  double burn_in_fraction = 0.5;  // discarded at every convergence check
  double psrf_threshold = 1.1;
  std::uint64_t seed = 0;

  // prior hyperparameters
  double sigma_prior_shape = 0.01;  // inverse-gamma on sigma^2
  double sigma_prior_scale = 0.01;
  double advance_prior_a = 1.0;  // Beta on each advance probability
  double advance_prior_b = 1.0;

  void validate() const;
};

struct FitResult {
  Matrix phase_probs;  // weeks x 5, rows sum to 1
  std::vector<PhaseModel> param_draws;  // post burn-in, chain-major
  // matching retained path draws, draw-major, weeks entries each (1..5)
  std::vector<std::uint8_t> path_draws;
  std::array<double, kPhases> psrf{};   // split-chain PSRF per emission mean
  bool converged = false;
  std::int64_t total_iterations = 0;  // per chain
  std::uint64_t order_fallbacks = 0;  // sorted-into-shape mean draws
  SamplerConfig config;

  std::array<double, kPhases> posterior_mu() const;
  std::array<double, kPhases> posterior_sigma() const;
  std::array<double, kPhases - 1> posterior_advance() const;

  void save(const std::string& path) const;  // versioned JSON document
};

// Loads the subset of a saved fit needed downstream (phase_probs,
// psrf, flags); param_draws are not persisted.
FitResult load_fit(const std::string& path);

// Exact smoothed marginals P(phase_t = k | series, model) under the
// left-to-right law, computed by a scaled forward/backward pass.
Matrix forward_backward_exact(const IliSeries& series, const PhaseModel& model);

// One exact draw from P(path | series, model) by forward filtering /
// backward sampling. Paths are monotone non-decreasing by construction.
std::vector<int> ffbs_sample(const IliSeries& series, const PhaseModel& model,
                             std::mt19937_64& rng);

// Gibbs sampler: alternates an FFBS path draw, order-constrained
// conjugate emission updates and Beta advance updates across
// config.chains independent chains, extending every chain by
// config.increment until the split-chain PSRF of all five emission means
// drops below the threshold (or max_iterations is reached, in which case
// converged is false). Deterministic given (series, config).
FitResult fit(const IliSeries& series, const SamplerConfig& config);

// Potential scale reduction factor over >= 2 equal-length chains.
// Throws when every chain has zero within-chain variance.
double gelman_rubin(const std::vector<std::vector<double>>& chains);

}  // namespace fluscan::fluhmm

#endif
