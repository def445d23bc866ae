#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace aam::training {

struct AdamConfig {
  double learning_rate = 0.003;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Adaptive-moment gradient descent with bias-corrected first/second moments.
class Adam {
 public:
  Adam(std::size_t n, AdamConfig config);

  void step(std::span<double> params, std::span<const double> grad);
  std::size_t steps() const { return t_; }

 private:
  AdamConfig config_;
  std::vector<double> m_;
  std::vector<double> v_;
  std::size_t t_ = 0;
};

}  // namespace aam::training
