#include "aam/dataset/features.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "aam/common/log.hpp"

namespace aam::dataset {

double Normalizer::scale_value(Metric m, double value) const {
  const MetricRange& r = ranges[index_of(m)];
  const double span = r.max - r.min;
  if (span <= 0.0) return 0.5;
  return std::clamp((value - r.min) / span, 0.0, 1.0);
}

double Normalizer::scale_gap(double seconds) const { return std::clamp(seconds / t_max, 0.0, 1.0); }

double max_inter_test_gap(const Cohort& cohort) {
  double best = 0.0;
  for (const auto& p : cohort.participants) {
    for (std::size_t i = 1; i < p.results.size(); ++i) {
      best = std::max(best, static_cast<double>(p.results[i].timestamp - p.results[i - 1].timestamp));
    }
  }
  return best;
}

Normalizer fit_normalizer(const Cohort& train) {
  if (train.empty()) throw std::invalid_argument("fit_normalizer: training fold is empty");
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::array<double, kMetricCount> lo;
  std::array<double, kMetricCount> hi;
  lo.fill(inf);
  hi.fill(-inf);
  for (const auto& p : train.participants) {
    for (const auto& r : p.results) {
      const auto m = index_of(r.metric);
      lo[m] = std::min(lo[m], r.value);
      hi[m] = std::max(hi[m], r.value);
    }
  }
  Normalizer n;
  for (std::size_t m = 0; m < kMetricCount; ++m) {
    if (lo[m] == inf) {
      warn("metric '" + std::string(to_string(static_cast<Metric>(m))) +
           "' never observed in training fold; using range (0, 1)");
      n.ranges[m] = {0.0, 1.0};
    } else {
      n.ranges[m] = {lo[m], hi[m]};
    }
  }
  const double gap = max_inter_test_gap(train);
  n.t_max = gap > 0.0 ? gap : kFallbackTimeScale;
  return n;
}

FeatureSequence build_features(const Participant& p, const Normalizer& n) {
  FeatureSequence fs{numeric::Matrix(p.results.size(), kFeatureDim)};
  for (std::size_t i = 0; i < p.results.size(); ++i) {
    const TestResult& r = p.results[i];
    auto row = fs.values.row(i);
    row[kTimeIndex] = i == 0 ? 0.0 : n.scale_gap(static_cast<double>(r.timestamp - p.results[i - 1].timestamp));
    row[kMetricOffset + index_of(r.metric)] = 1.0;
    row[kScoreIndex] = n.scale_value(r.metric, r.value);
  }
  return fs;
}

FeatureSequence truncate(FeatureSequence fs, std::size_t k_max) {
  if (k_max == 0) throw std::invalid_argument("truncate: k_max must be at least 1");
  fs.values.truncate_rows(k_max);
  return fs;
}

Demographics demographics_of(const Participant& p) {
  return {std::clamp(static_cast<double>(p.age) / 100.0, 0.0, 1.0), static_cast<double>(p.sex)};
}

std::vector<Sample> make_samples(const Cohort& cohort, const Normalizer& n, std::size_t k_max) {
  std::vector<Sample> out;
  out.reserve(cohort.size());
  for (const auto& p : cohort.participants) {
    out.push_back({p.id, truncate(build_features(p, n), k_max), demographics_of(p), p.has_ms});
  }
  return out;
}

}  // namespace aam::dataset
