#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "aam/evaluation/bootstrap.hpp"

namespace aam::evaluation {

struct MetricEstimate {
  std::string name;
  double point = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> samples;  // bootstrap distribution (not serialised)
};

struct MetricsReport {
  std::string model;
  std::uint64_t seed = 0;
  double threshold = 0.5;
  std::size_t n_test = 0;
  std::vector<MetricEstimate> metrics;  // auc, aupr, f1, sensitivity, specificity
  std::size_t dropped_resamples = 0;
  double containment_rate = 1.0;  // fraction of metrics with lo <= point <= hi
  std::vector<std::string> warnings;

  const MetricEstimate& metric(std::string_view name) const;
};

// Point estimates and bootstrap CIs for all five reported metrics. All metrics
// share the same resamples (same seed). Requires both classes in `labels`.
MetricsReport evaluate_scores(std::span<const double> scores, std::span<const int> labels, double threshold,
                              const std::string& model, const BootstrapOptions& options);

nlohmann::json to_json(const MetricsReport& r);

}  // namespace aam::evaluation
