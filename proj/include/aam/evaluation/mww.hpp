#pragma once

#include <span>
#include <vector>

namespace aam::evaluation {

// Samples smaller than this (in both groups) use exact enumeration.
inline constexpr std::size_t kMwwExactLimit = 20;

// Two-sided Mann-Whitney-Wilcoxon p-value. Exact when both samples have fewer
// than kMwwExactLimit values, otherwise the tie-corrected normal approximation.
// Throws std::invalid_argument if either sample is empty.
double mww_test(std::span<const double> a, std::span<const double> b);

// Exact null distribution of the midrank sum of `a` over all C(n, n_a)
// assignments; p = P(|W - E W| >= |w_obs - E W|).
double mww_exact(std::span<const double> a, std::span<const double> b);

// Normal approximation with tie and continuity correction.
double mww_normal(std::span<const double> a, std::span<const double> b);

// U statistic of `a`: count of pairs with a > b plus half the ties.
double mww_u(std::span<const double> a, std::span<const double> b);

// p * m, clipped to 1. Throws std::invalid_argument for p outside [0, 1].
std::vector<double> bonferroni(std::span<const double> p_values);

}  // namespace aam::evaluation
