#pragma once

// Brute-force reference implementations for the evaluation metrics.

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <vector>

namespace aam::test {

struct Instance {
  std::vector<double> scores;
  std::vector<int> labels;
};

// Random scores on a coarse grid (so ties occur) with both classes present.
inline Instance random_instance(std::mt19937_64& rng, std::size_t n) {
  Instance inst;
  std::uniform_int_distribution<int> grid(0, 20);
  do {
    inst.scores.assign(n, 0.0);
    inst.labels.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      inst.scores[i] = grid(rng) / 20.0;
      inst.labels[i] = static_cast<int>(rng() % 2);
    }
  } while (std::count(inst.labels.begin(), inst.labels.end(), 1) == 0 ||
           std::count(inst.labels.begin(), inst.labels.end(), 0) == 0);
  return inst;
}

inline std::vector<double> random_ties(std::mt19937_64& rng, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v) x = static_cast<double>(rng() % 6);
  return v;
}

// Every positive-negative pair.
inline double brute_auc(const std::vector<double>& s, const std::vector<int>& y) {
  double wins = 0, pairs = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (y[i] == 1 && y[j] == 0) {
        pairs += 1;
        wins += s[i] > s[j] ? 1.0 : (s[i] == s[j] ? 0.5 : 0.0);
      }
    }
  }
  return wins / pairs;
}

// Every distinct threshold from the top, recounting the confusion matrix each time.
inline double brute_aupr(const std::vector<double>& s, const std::vector<int>& y) {
  std::set<double, std::greater<>> thresholds(s.begin(), s.end());
  double positives = 0;
  for (int v : y) positives += v;
  double area = 0, prev_recall = 0;
  for (double t : thresholds) {
    double tp = 0, called = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] >= t) {
        called += 1;
        tp += y[i];
      }
    }
    const double recall = tp / positives;
    area += (recall - prev_recall) * (tp / called);
    prev_recall = recall;
  }
  return area;
}

// Two-sided p over every relabelling of the pooled sample into groups of the original sizes.
inline double permutation_mww(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> pooled = a;
  pooled.insert(pooled.end(), b.begin(), b.end());
  const std::size_t n = pooled.size(), na = a.size();
  auto u_of = [&](const std::vector<bool>& in_a) {
    double u = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!in_a[i]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (in_a[j]) continue;
        u += pooled[i] > pooled[j] ? 1.0 : (pooled[i] == pooled[j] ? 0.5 : 0.0);
      }
    }
    return u;
  };
  const double mean = static_cast<double>(na * (n - na)) / 2.0;
  std::vector<bool> obs(n, false);
  for (std::size_t i = 0; i < na; ++i) obs[i] = true;
  const double dev = std::abs(u_of(obs) - mean);
  std::vector<bool> mask(n, false);
  std::fill(mask.begin(), mask.begin() + static_cast<long>(na), true);
  double extreme = 0, total = 0;
  std::sort(mask.begin(), mask.end());
  do {
    total += 1;
    if (std::abs(u_of(mask) - mean) >= dev - 1e-9) extreme += 1;
  } while (std::next_permutation(mask.begin(), mask.end()));
  return extreme / total;
}

}  // namespace aam::test
