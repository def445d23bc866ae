#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "aam/dataset/cohort.hpp"
#include "aam/dataset/features.hpp"
#include "aam/synth/config.hpp"

namespace aam::test {

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

inline double max_rel_error(const std::vector<double>& a, const std::vector<double>& b, double floor = 1e-8) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double denom = std::max({std::abs(a[i]), std::abs(b[i]), floor});
    worst = std::max(worst, std::abs(a[i] - b[i]) / denom);
  }
  return worst;
}

// A random feature sequence with valid one-hot blocks and entries in [0, 1].
inline dataset::FeatureSequence random_sequence(std::mt19937_64& rng, std::size_t k) {
  dataset::FeatureSequence fs{numeric::Matrix(k, dataset::kFeatureDim)};
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> metric(0, dataset::kMetricCount - 1);
  for (std::size_t i = 0; i < k; ++i) {
    fs.values(i, dataset::kTimeIndex) = i == 0 ? 0.0 : u(rng);
    fs.values(i, dataset::kMetricOffset + metric(rng)) = 1.0;
    fs.values(i, dataset::kScoreIndex) = u(rng);
  }
  return fs;
}

inline dataset::Sample random_sample(std::mt19937_64& rng, std::size_t k, int label) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return {"s", random_sequence(rng, k), {u(rng), u(rng) < 0.5 ? 0.0 : 1.0}, label};
}

inline dataset::TestResult result(dataset::Metric m, double value, std::int64_t ts) {
  return {dataset::test_type_of(m), m, value, ts};
}

// Small cohort where each participant has `per_participant` mood records one day apart.
inline dataset::Cohort toy_cohort(std::size_t n, std::size_t per_participant, std::uint64_t seed = 1) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> age(20, 70);
  dataset::Cohort c;
  for (std::size_t i = 0; i < n; ++i) {
    dataset::Participant p;
    p.id = "T" + std::to_string(i);
    p.age = age(rng);
    p.sex = static_cast<int>(i % 2);
    p.has_ms = static_cast<int>((i / 2) % 2);
    for (std::size_t j = 0; j < per_participant; ++j) {
      p.results.push_back(result(dataset::Metric::mood_score, 1.0 + static_cast<double>((i + j) % 5),
                                 1'600'000'000 + static_cast<std::int64_t>(j) * 86400));
    }
    c.participants.push_back(std::move(p));
  }
  return c;
}

// Synthetic config small enough for fast end-to-end tests.
inline synth::SynthConfig small_synth_config(std::size_t n, std::uint64_t seed) {
  synth::SynthConfig cfg;
  cfg.n_participants = n;
  cfg.seed = seed;
  cfg.usage_median_days = 6;
  cfg.usage_p90_days = 20;
  return cfg;
}

}  // namespace aam::test
