#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace aam::evaluation {

using MetricFn = std::function<double(std::span<const double> scores, std::span<const int> labels)>;

struct BootstrapResult {
  double point = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> samples;  // metric value per kept resample, in draw order
  std::size_t redraws = 0;      // single-class resamples that were redrawn
  std::size_t dropped = 0;      // resamples abandoned after max_retries redraws
};

struct BootstrapOptions {
  int n_boot = 1000;
  std::uint64_t seed = 0;
  int max_retries = 10;
  std::size_t threads = 1;
};

// Percentile interval (2.5th, 97.5th) of metric_fn over participant resamples
// drawn with replacement. Resample b uses its own derived seed, so the result is
// a pure function of the inputs and seed, independent of `threads`.
BootstrapResult bootstrap_ci(const MetricFn& metric_fn, std::span<const double> scores, std::span<const int> labels,
                             const BootstrapOptions& options = {});

// Linearly interpolated percentile (q in [0, 1]) of an unsorted sample.
double percentile(std::vector<double> values, double q);

}  // namespace aam::evaluation
