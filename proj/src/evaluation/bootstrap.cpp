#include "aam/evaluation/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "aam/common/parallel.hpp"
#include "aam/common/seed.hpp"
#include "aam/evaluation/metrics.hpp"

namespace aam::evaluation {

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("percentile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("percentile: q must be in [0, 1]");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

BootstrapResult bootstrap_ci(const MetricFn& metric_fn, std::span<const double> scores, std::span<const int> labels,
                             const BootstrapOptions& options) {
  if (scores.size() != labels.size() || scores.empty()) {
    throw std::invalid_argument("bootstrap_ci: scores and labels must be non-empty and equally long");
  }
  if (options.n_boot < 1) throw std::invalid_argument("bootstrap_ci: n_boot must be >= 1");
  const std::size_t n = scores.size();
  const auto b_count = static_cast<std::size_t>(options.n_boot);

  struct Draw {
    std::optional<double> value;
    std::size_t redraws = 0;
  };
  std::vector<Draw> draws(b_count);
  parallel_for(b_count, options.threads, [&](std::size_t b) {
    Rng rng(derive_seed(options.seed, "bootstrap", b));
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::vector<double> s(n);
    std::vector<int> l(n);
    for (int attempt = 0; attempt <= options.max_retries; ++attempt) {
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = pick(rng);
        s[i] = scores[j];
        l[i] = labels[j];
      }
      if (has_both_classes(l)) {
        draws[b].value = metric_fn(s, l);
        return;
      }
      if (attempt < options.max_retries) ++draws[b].redraws;
    }
  });

  BootstrapResult r;
  r.point = metric_fn(scores, labels);
  for (const auto& d : draws) {
    r.redraws += d.redraws;
    if (d.value) {
      r.samples.push_back(*d.value);
    } else {
      ++r.dropped;
    }
  }
  if (r.samples.empty()) {
    r.lo = r.hi = r.point;
    return r;
  }
  r.lo = percentile(r.samples, 0.025);
  r.hi = percentile(r.samples, 0.975);
  return r;
}

}  // namespace aam::evaluation
