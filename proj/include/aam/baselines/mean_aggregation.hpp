#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "aam/dataset/features.hpp"

namespace aam::baselines {

// Mean of the normalised score components of a sequence, in [0, 1].
// Throws std::invalid_argument on an empty sequence.
double mean_agg_score(const dataset::FeatureSequence& fs);

// Mean Aggregation baseline. The raw mean has no inherent direction (higher is
// worse for some metrics and better for others), so the orientation with the
// higher validation AUC is kept.
struct MeanAggregation {
  bool flipped = false;

  double score(const dataset::FeatureSequence& fs) const;  // 0.5 for empty sequences
  bool operator==(const MeanAggregation&) const = default;
};

MeanAggregation fit_mean_aggregation(const std::vector<dataset::Sample>& validation);

struct LogisticOptions {
  double learning_rate = 1.0;
  double tolerance = 1e-8;  // stop once |delta loss| falls below
  int max_iterations = 10000;
};

// Logistic regression over a fixed number of inputs, fit by full-batch gradient descent on mean BCE.
struct LogisticModel {
  std::vector<double> coefficients;
  double intercept = 0.0;
  int iterations = 0;
  double final_loss = 0.0;

  double predict(std::span<const double> x) const;
  bool operator==(const LogisticModel&) const = default;
};

// Throws std::invalid_argument if the labels contain a single class or rows are ragged.
LogisticModel fit_logistic(const std::vector<std::vector<double>>& x, std::span<const int> y,
                           const LogisticOptions& options = {});

// "Mean Aggregation + age + sex": logistic head over (mean score, age/100, sex).
struct MeanAggDemo {
  LogisticModel head;

  double score(const dataset::Sample& s) const;
  bool operator==(const MeanAggDemo&) const = default;
};

std::vector<double> mean_agg_demo_inputs(const dataset::Sample& s);

MeanAggDemo fit_mean_agg_demo(const std::vector<dataset::Sample>& train, const LogisticOptions& options = {});

}  // namespace aam::baselines
