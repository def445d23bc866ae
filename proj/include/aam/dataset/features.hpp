#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "aam/dataset/cohort.hpp"
#include "aam/numeric/matrix.hpp"

namespace aam::dataset {

// Layout of one per-test feature vector: [t | one-hot metric (16) | s].
inline constexpr std::size_t kTimeIndex = 0;
inline constexpr std::size_t kMetricOffset = 1;
inline constexpr std::size_t kScoreIndex = kMetricOffset + kMetricCount;
inline constexpr std::size_t kFeatureDim = kScoreIndex + 1;

// Fallback for degenerate inter-test gaps (no gaps, or all gaps zero).
inline constexpr double kFallbackTimeScale = 1.0;

struct MetricRange {
  double min = 0.0;
  double max = 1.0;
  bool operator==(const MetricRange&) const = default;
};

struct Normalizer {
  std::array<MetricRange, kMetricCount> ranges{};
  double t_max = kFallbackTimeScale;  // seconds

  double scale_value(Metric m, double value) const;
  double scale_gap(double seconds) const;

  bool operator==(const Normalizer&) const = default;
};

// Fits per-metric extrema and the largest inter-test gap on the training fold only.
// Metrics absent from training get (0, 1) and a warning.
Normalizer fit_normalizer(const Cohort& train);

// Largest gap between consecutive results of any participant (0 if none).
double max_inter_test_gap(const Cohort& cohort);

// Per-participant feature matrix: one row of kFeatureDim entries per test result.
struct FeatureSequence {
  numeric::Matrix values;  // k x kFeatureDim

  std::size_t count() const { return values.rows(); }
  bool empty() const { return values.rows() == 0; }
  std::span<const double> row(std::size_t i) const { return values.row(i); }
  double score(std::size_t i) const { return values(i, kScoreIndex); }
  double gap(std::size_t i) const { return values(i, kTimeIndex); }

  bool operator==(const FeatureSequence&) const = default;
};

FeatureSequence build_features(const Participant& p, const Normalizer& n);

// Keeps the earliest min(k, k_max) vectors. Throws if k_max == 0.
FeatureSequence truncate(FeatureSequence fs, std::size_t k_max);

// Demographic head inputs: age / 100 clipped to [0, 1], sex in {0, 1}.
struct Demographics {
  double age = 0.0;
  double sex = 0.0;
  bool operator==(const Demographics&) const = default;
};

Demographics demographics_of(const Participant& p);

// Everything a model needs about one participant.
struct Sample {
  std::string id;
  FeatureSequence features;
  Demographics demographics;
  int label = 0;
};

std::vector<Sample> make_samples(const Cohort& cohort, const Normalizer& n, std::size_t k_max);

}  // namespace aam::dataset
