#ifndef FLUSCAN_REGRESS_HPP
#define FLUSCAN_REGRESS_HPP

#include <map>
#include <span>
#include <string>
#include <vector>

#include "fluscan/core.hpp"

namespace fluscan::regress {

struct LinearModel {
  std::vector<std::string> terms;  // feature order
  std::vector<double> coefficients;
  double intercept = 0.0;
  std::size_t n_samples = 0;  // fit sample count
  double rss = 0.0;           // residual sum of squares at the fit

  void save(const std::string& path) const;  // versioned JSON document
  static LinearModel load(const std::string& path);
};

// Least squares via Householder QR with column pivoting on [X | 1].
// Throws if n < p+1 or if the pivoted R exposes a dependent column (the
// error names the offending feature column, or the intercept).
LinearModel fit_ols(const Matrix& features, std::span<const double> targets,
                    std::vector<std::string> term_names = {});

// max(0, coefficients . x + intercept); throws on length mismatch.
double predict(const LinearModel& model, std::span<const double> features);

// Applies the weekly-trained model to daily counts: features are scaled
// by 7, predicted, and the (clamped) prediction divided by 7, so daily
// estimates stay sum-consistent with the weekly fit.
std::map<DayStamp, double> estimate_daily(const LinearModel& model,
                                          const DailyCounters& counters,
                                          DayStamp from, DayStamp to);

}  // namespace fluscan::regress

#endif
