#include "aam/training/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "aam/evaluation/metrics.hpp"

namespace aam::training {

double select_threshold(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw std::invalid_argument("select_threshold: size mismatch");
  if (scores.empty()) return 0.5;
  const auto [lo, hi] = std::minmax_element(scores.begin(), scores.end());
  if (*lo == *hi) return 0.5;

  std::vector<double> candidates(scores.begin(), scores.end());
  candidates.push_back(0.5);
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  double best = 0.5;
  double best_f1 = -1.0;
  for (double c : candidates) {
    const double f1 = evaluation::confusion_metrics(scores, labels, c).f1;
    const bool better = f1 > best_f1 + 1e-12;
    const bool tie_closer = std::abs(f1 - best_f1) <= 1e-12 && std::abs(c - 0.5) < std::abs(best - 0.5);
    if (better || tie_closer) {
      best = c;
      best_f1 = f1;
    }
  }
  return best;
}

}  // namespace aam::training
