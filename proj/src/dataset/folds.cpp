#include "aam/dataset/folds.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "aam/common/seed.hpp"

namespace aam::dataset {

double nearest_rank_quantile(std::vector<double> sample, double q) {
  if (sample.empty()) throw std::invalid_argument("nearest_rank_quantile: empty sample");
  std::sort(sample.begin(), sample.end());
  const double rank = std::ceil(q * static_cast<double>(sample.size()));
  const auto idx = static_cast<std::size_t>(std::clamp(rank, 1.0, static_cast<double>(sample.size()))) - 1;
  return sample[idx];
}

std::array<std::size_t, 3> fold_targets(std::size_t n, const SplitRatios& ratios) {
  const std::array<double, 3> r{ratios.train, ratios.validation, ratios.test};
  std::array<std::size_t, 3> out{};
  std::array<double, 3> rem{};
  std::size_t assigned = 0;
  for (int f = 0; f < 3; ++f) {
    const double exact = r[f] * static_cast<double>(n);
    out[f] = static_cast<std::size_t>(std::floor(exact));
    rem[f] = exact - std::floor(exact);
    assigned += out[f];
  }
  std::array<int, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return rem[a] > rem[b]; });
  for (int i = 0; assigned < n; ++i, ++assigned) ++out[order[i % 3]];
  return out;
}

std::vector<int> stratum_keys(const Cohort& cohort) {
  std::vector<double> ages;
  std::vector<double> counts;
  for (const auto& p : cohort.participants) {
    ages.push_back(p.age);
    counts.push_back(static_cast<double>(p.results.size()));
  }
  std::array<double, 3> age_cuts{};
  double count_median = 0.0;
  if (!ages.empty()) {
    for (int q = 0; q < 3; ++q) age_cuts[q] = nearest_rank_quantile(ages, 0.25 * (q + 1));
    count_median = nearest_rank_quantile(counts, 0.5);
  }
  std::vector<int> keys;
  keys.reserve(cohort.size());
  for (const auto& p : cohort.participants) {
    int age_bin = 0;
    while (age_bin < 3 && p.age > age_cuts[age_bin]) ++age_bin;
    const int count_bin = static_cast<double>(p.results.size()) > count_median ? 1 : 0;
    keys.push_back(((p.has_ms * 2 + p.sex) * 4 + age_bin) * 2 + count_bin);
  }
  return keys;
}

Folds stratified_split(const Cohort& cohort, const SplitRatios& ratios, std::uint64_t seed) {
  const double sum = ratios.train + ratios.validation + ratios.test;
  if (std::abs(sum - 1.0) > 1e-9 || ratios.train < 0 || ratios.validation < 0 || ratios.test < 0) {
    throw std::invalid_argument("stratified_split: ratios must be non-negative and sum to 1 (got " +
                                std::to_string(sum) + ")");
  }
  if (cohort.size() < 10) {
    throw std::invalid_argument("stratified_split: cohort has " + std::to_string(cohort.size()) +
                                " participants, need at least 10");
  }

  const auto keys = stratum_keys(cohort);
  std::map<int, std::vector<std::size_t>> strata;
  for (std::size_t i = 0; i < keys.size(); ++i) strata[keys[i]].push_back(i);

  Rng rng(seed);
  std::vector<std::size_t> sequence;
  sequence.reserve(cohort.size());
  for (auto& [key, members] : strata) {
    std::shuffle(members.begin(), members.end(), rng);
    sequence.insert(sequence.end(), members.begin(), members.end());
  }

  const auto targets = fold_targets(cohort.size(), ratios);
  const double n = static_cast<double>(cohort.size());
  std::array<std::size_t, 3> assigned{};
  std::array<Cohort*, 3> folds_out{};
  Folds folds;
  folds_out = {&folds.train, &folds.validation, &folds.test};
  for (std::size_t pos = 0; pos < sequence.size(); ++pos) {
    int best = -1;
    double best_deficit = 0.0;
    for (int f = 0; f < 3; ++f) {
      if (assigned[f] >= targets[f]) continue;
      const double deficit = static_cast<double>(targets[f]) * static_cast<double>(pos + 1) / n -
                             static_cast<double>(assigned[f]);
      if (best < 0 || deficit > best_deficit + 1e-12) {
        best = f;
        best_deficit = deficit;
      }
    }
    ++assigned[best];
    folds_out[best]->participants.push_back(cohort.participants[sequence[pos]]);
  }
  return folds;
}

}  // namespace aam::dataset
