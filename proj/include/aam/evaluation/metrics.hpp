#pragma once

#include <span>
#include <vector>

namespace aam::evaluation {

// P(score_pos > score_neg) + 0.5 P(tie), via the midrank statistic.
// Throws std::invalid_argument unless both classes are present.
double roc_auc(std::span<const double> scores, std::span<const int> labels);

// Average-precision style area: sum over descending distinct thresholds of
// (recall_j - recall_{j-1}) * precision_j. Throws if there are no positives.
double aupr(std::span<const double> scores, std::span<const int> labels);

struct ConfusionMetrics {
  double f1 = 0.0;
  double sensitivity = 0.0;
  double specificity = 0.0;
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
};

// score >= threshold counts as a positive call. Rates with an empty denominator are 0.
ConfusionMetrics confusion_metrics(std::span<const double> scores, std::span<const int> labels, double threshold);

struct RocPoint {
  double threshold;
  double fpr;
  double tpr;
};

// ROC curve over distinct thresholds, from (0,0) to (1,1).
std::vector<RocPoint> roc_curve(std::span<const double> scores, std::span<const int> labels);

bool has_both_classes(std::span<const int> labels);

}  // namespace aam::evaluation
