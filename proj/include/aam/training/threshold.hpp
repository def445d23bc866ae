#pragma once

#include <span>

namespace aam::training {

// Decision threshold maximising F1 (score >= threshold is positive).
// Candidates are the distinct scores plus 0.5; among equal-F1 candidates the
// one closest to 0.5 wins. Scores without any spread yield 0.5.
double select_threshold(std::span<const double> scores, std::span<const int> labels);

}  // namespace aam::training
