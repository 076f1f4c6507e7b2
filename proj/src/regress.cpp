#include "fluscan/regress.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "fluscan/kernels.hpp"
#include "json.hpp"

namespace fluscan::regress {

namespace {

std::string column_label(std::size_t j, std::size_t p) {
  return j == p ? std::string("the intercept column")
                : "feature column " + std::to_string(j);
}

}  // namespace

LinearModel fit_ols(const Matrix& features, std::span<const double> targets,
                    std::vector<std::string> term_names) {
  const std::size_t n = features.rows;
  const std::size_t p = features.cols;
  const std::size_t m = p + 1;  // + intercept
  if (targets.size() != n)
    throw std::invalid_argument("fit_ols: target length does not match rows");
  if (n < m)
    throw std::invalid_argument("fit_ols: need at least " + std::to_string(m) +
                                " samples for " + std::to_string(p) +
                                " features plus intercept, got " +
                                std::to_string(n));
  if (!term_names.empty() && term_names.size() != p)
    throw std::invalid_argument("fit_ols: term name count mismatch");

  const auto& kern = kernels::active();

  // design matrix as columns, intercept last
  std::vector<std::vector<double>> col(m, std::vector<double>(n));
  for (std::size_t j = 0; j < p; ++j)
    for (std::size_t i = 0; i < n; ++i) col[j][i] = features.at(i, j);
  col[p].assign(n, 1.0);
  std::vector<double> qty(targets.begin(), targets.end());
  std::vector<std::size_t> perm(m);
  for (std::size_t j = 0; j < m; ++j) perm[j] = j;

  double max_initial_norm = 0.0;
  for (std::size_t j = 0; j < m; ++j)
    max_initial_norm =
        std::max(max_initial_norm, std::sqrt(kern.dot(col[j].data(), col[j].data(), n)));
  const double tol = 1e-10 * max_initial_norm;

  std::vector<double> diag(m, 0.0);
  std::vector<std::vector<double>> reflector(m);

  for (std::size_t k = 0; k < m; ++k) {
    // exact residual norms of the remaining subcolumns; m is tiny
    std::size_t pivot = k;
    double best = -1.0;
    for (std::size_t j = k; j < m; ++j) {
      const double nrm2 = kern.dot(col[j].data() + k, col[j].data() + k, n - k);
      if (nrm2 > best) {
        best = nrm2;
        pivot = j;
      }
    }
    if (std::sqrt(std::max(best, 0.0)) <= tol) {
      // every remaining column lies in the span of the processed ones
      std::size_t worst = m;
      for (std::size_t j = k; j < m; ++j) worst = std::min(worst, perm[j]);
      throw std::invalid_argument("fit_ols: " + column_label(worst, p) +
                                  " is linearly dependent on the others");
    }
    std::swap(col[k], col[pivot]);
    std::swap(perm[k], perm[pivot]);

    // Householder reflector for rows k..n-1 of column k
    std::vector<double> v(col[k].begin() + static_cast<std::ptrdiff_t>(k),
                          col[k].end());
    const double sigma = std::sqrt(kern.dot(v.data(), v.data(), v.size()));
    const double alpha = v[0] >= 0.0 ? -sigma : sigma;
    v[0] -= alpha;
    const double vtv = kern.dot(v.data(), v.data(), v.size());
    diag[k] = alpha;
    if (vtv > 0.0) {
      const double beta = 2.0 / vtv;
      for (std::size_t j = k + 1; j < m; ++j) {
        const double s = kern.dot(v.data(), col[j].data() + k, v.size());
        kern.axpy(-beta * s, v.data(), col[j].data() + k, v.size());
      }
      const double sy = kern.dot(v.data(), qty.data() + k, v.size());
      kern.axpy(-beta * sy, v.data(), qty.data() + k, v.size());
    }
    reflector[k] = std::move(v);
  }

  // back substitution on the m-by-m upper triangle
  std::vector<double> w(m, 0.0);
  for (std::size_t kk = m; kk-- > 0;) {
    double s = qty[kk];
    for (std::size_t j = kk + 1; j < m; ++j) s -= col[j][kk] * w[j];
    w[kk] = s / diag[kk];
  }

  LinearModel model;
  model.coefficients.assign(p, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    if (perm[k] == p)
      model.intercept = w[k];
    else
      model.coefficients[perm[k]] = w[k];
  }
  model.terms = std::move(term_names);
  model.n_samples = n;

  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double yhat = model.intercept;
    for (std::size_t j = 0; j < p; ++j)
      yhat += model.coefficients[j] * features.at(i, j);
    const double r = targets[i] - yhat;
    rss += r * r;
  }
  model.rss = rss;
  return model;
}

double predict(const LinearModel& model, std::span<const double> features) {
  if (features.size() != model.coefficients.size())
    throw std::invalid_argument(
        "predict: feature vector length " + std::to_string(features.size()) +
        " does not match model (" + std::to_string(model.coefficients.size()) +
        ")");
  const double raw = kernels::active().dot(model.coefficients.data(),
                                           features.data(), features.size()) +
                     model.intercept;
  return std::max(0.0, raw);
}

std::map<DayStamp, double> estimate_daily(const LinearModel& model,
                                          const DailyCounters& counters,
                                          DayStamp from, DayStamp to) {
  const std::size_t p = model.coefficients.size();
  if (model.terms.size() != p)
    throw std::invalid_argument("estimate_daily: model has no term names");
  // map model terms onto counter term ids; absent terms count as zero
  std::vector<int> ids(p, -1);
  const auto& names = counters.term_names();
  for (std::size_t j = 0; j < p; ++j) {
    auto it = std::find(names.begin(), names.end(), model.terms[j]);
    if (it != names.end()) ids[j] = static_cast<int>(it - names.begin());
  }
  std::map<DayStamp, double> out;
  std::vector<double> x(p);
  for (std::int64_t d = from.to_days(); d <= to.to_days(); ++d) {
    const DayStamp day = DayStamp::from_days(d);
    for (std::size_t j = 0; j < p; ++j)
      x[j] = ids[j] < 0 ? 0.0
                        : 7.0 * static_cast<double>(counters.at(day, ids[j]));
    out[day] = predict(model, x) / 7.0;
  }
  return out;
}

void LinearModel::save(const std::string& path) const {
  nlohmann::json j;
  j["version"] = 1;
  j["terms"] = terms;
  j["coefficients"] = coefficients;
  j["intercept"] = intercept;
  j["training"] = {{"n_samples", n_samples}, {"rss", rss}};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << j.dump(2) << '\n';
}

LinearModel LinearModel::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open model file " + path);
  nlohmann::json j = nlohmann::json::parse(in);
  if (!j.contains("version") || j["version"].get<int>() != 1)
    throw std::runtime_error(path + ": unsupported model version");
  LinearModel m;
  m.terms = j["terms"].get<std::vector<std::string>>();
  m.coefficients = j["coefficients"].get<std::vector<double>>();
  m.intercept = j["intercept"].get<double>();
  if (m.terms.size() != m.coefficients.size())
    throw std::runtime_error(path + ": term/coefficient count mismatch");
  if (j.contains("training")) {
    m.n_samples = j["training"].value("n_samples", std::size_t{0});
    m.rss = j["training"].value("rss", 0.0);
  }
  return m;
}

}  // namespace fluscan::regress
