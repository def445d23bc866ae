#include "aam/baselines/mean_aggregation.hpp"

#include <cmath>
#include <stdexcept>

#include "aam/evaluation/metrics.hpp"
#include "aam/numeric/ops.hpp"

namespace aam::baselines {

double mean_agg_score(const dataset::FeatureSequence& fs) {
  if (fs.empty()) throw std::invalid_argument("mean_agg_score: empty feature sequence");
  double s = 0.0;
  for (std::size_t i = 0; i < fs.count(); ++i) s += fs.score(i);
  return s / static_cast<double>(fs.count());
}

double MeanAggregation::score(const dataset::FeatureSequence& fs) const {
  if (fs.empty()) return 0.5;
  const double y = mean_agg_score(fs);
  return flipped ? 1.0 - y : y;
}

MeanAggregation fit_mean_aggregation(const std::vector<dataset::Sample>& validation) {
  std::vector<double> scores;
  std::vector<int> labels;
  for (const auto& s : validation) {
    scores.push_back(MeanAggregation{}.score(s.features));
    labels.push_back(s.label);
  }
  if (!evaluation::has_both_classes(labels)) return {};
  return {evaluation::roc_auc(scores, labels) < 0.5};
}

double LogisticModel::predict(std::span<const double> x) const {
  if (x.size() != coefficients.size()) throw std::invalid_argument("LogisticModel::predict: input size mismatch");
  double z = intercept;
  for (std::size_t j = 0; j < x.size(); ++j) z += coefficients[j] * x[j];
  return numeric::sigmoid(z);
}

LogisticModel fit_logistic(const std::vector<std::vector<double>>& x, std::span<const int> y,
                           const LogisticOptions& options) {
  if (x.size() != y.size() || x.empty()) throw std::invalid_argument("fit_logistic: empty or mismatched data");
  if (!evaluation::has_both_classes(y)) {
    throw std::invalid_argument("fit_logistic: training labels contain a single class");
  }
  const std::size_t d = x.front().size();
  for (const auto& row : x) {
    if (row.size() != d) throw std::invalid_argument("fit_logistic: ragged input rows");
  }
  const double n = static_cast<double>(x.size());
  LogisticModel m{std::vector<double>(d, 0.0), 0.0, 0, 0.0};
  std::vector<double> grad(d);

  auto evaluate = [&](bool with_grad) {
    double loss = 0.0;
    double g0 = 0.0;
    if (with_grad) std::fill(grad.begin(), grad.end(), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
      double z = m.intercept;
      for (std::size_t j = 0; j < d; ++j) z += m.coefficients[j] * x[i][j];
      loss += numeric::softplus(z) - (y[i] ? z : 0.0);
      if (with_grad) {
        const double r = numeric::sigmoid(z) - y[i];
        g0 += r;
        for (std::size_t j = 0; j < d; ++j) grad[j] += r * x[i][j];
      }
    }
    if (with_grad) {
      for (double& g : grad) g /= n;
      g0 /= n;
    }
    return std::pair{loss / n, g0};
  };

  double prev = evaluate(false).first;
  for (int it = 1; it <= options.max_iterations; ++it) {
    const double g0 = evaluate(true).second;
    m.intercept -= options.learning_rate * g0;
    for (std::size_t j = 0; j < d; ++j) m.coefficients[j] -= options.learning_rate * grad[j];
    const double cur = evaluate(false).first;
    m.iterations = it;
    m.final_loss = cur;
    if (std::abs(prev - cur) < options.tolerance) break;
    prev = cur;
  }
  return m;
}

std::vector<double> mean_agg_demo_inputs(const dataset::Sample& s) {
  const double mean = s.features.empty() ? 0.5 : mean_agg_score(s.features);
  return {mean, s.demographics.age, s.demographics.sex};
}

double MeanAggDemo::score(const dataset::Sample& s) const { return head.predict(mean_agg_demo_inputs(s)); }

MeanAggDemo fit_mean_agg_demo(const std::vector<dataset::Sample>& train, const LogisticOptions& options) {
  std::vector<std::vector<double>> x;
  std::vector<int> y;
  for (const auto& s : train) {
    x.push_back(mean_agg_demo_inputs(s));
    y.push_back(s.label);
  }
  return {fit_logistic(x, y, options)};
}

}  // namespace aam::baselines
