#pragma once

#include <array>
#include <cstdint>

#include "aam/dataset/cohort.hpp"

namespace aam::dataset {

struct SplitRatios {
  double train = 0.7;
  double validation = 0.1;
  double test = 0.2;

  bool operator==(const SplitRatios&) const = default;
};

struct Folds {
  Cohort train;
  Cohort validation;
  Cohort test;
};

// Exact fold sizes for n participants: largest-remainder rounding of n * ratio.
std::array<std::size_t, 3> fold_targets(std::size_t n, const SplitRatios& ratios);

// Stratum key used for the split: diagnosis x sex x age quartile x test-count half.
// Quartile and median boundaries are computed over the whole cohort.
std::vector<int> stratum_keys(const Cohort& cohort);

// Randomised split within strata. Strata are visited in key order, members
// shuffled with the seeded RNG, and each position is assigned to the fold
// furthest below its running quota, so every stratum is split close to the
// ratios and the global sizes equal fold_targets() exactly.
// Throws std::invalid_argument if ratios do not sum to 1 or the cohort has fewer than 10 participants.
Folds stratified_split(const Cohort& cohort, const SplitRatios& ratios, std::uint64_t seed);

// Nearest-rank quantile (q in [0,1]) of an unsorted sample; sample must be non-empty.
double nearest_rank_quantile(std::vector<double> sample, double q);

}  // namespace aam::dataset
