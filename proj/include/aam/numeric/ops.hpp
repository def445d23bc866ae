#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "aam/common/seed.hpp"
#include "aam/numeric/matrix.hpp"

namespace aam::numeric {

enum class Activation { relu, tanh, sigmoid };

Activation activation_from_string(std::string_view name);
std::string_view to_string(Activation kind);

// out[r] = sum_c W[r, c] * x[c]. Throws std::invalid_argument on shape mismatch.
Vector matvec(const Matrix& w, std::span<const double> x);

Vector activation(Activation kind, std::span<const double> v);

// Derivative of the activation expressed through its output value y = f(v).
double activation_derivative_from_output(Activation kind, double y);

// Branches on sign so exp() never overflows.
inline double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// log(1 + exp(x)) without overflow.
inline double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

// Max-subtracted softmax. Throws on empty input.
Vector softmax(std::span<const double> v);
void softmax_inplace(std::span<double> v);

// Glorot-uniform fill: U(-sqrt(6/(fan_in+fan_out)), +sqrt(6/(fan_in+fan_out))).
void glorot_uniform(std::span<double> out, std::size_t fan_in, std::size_t fan_out, Rng& rng);

bool all_finite(std::span<const double> v);

// Central-difference gradient of f at x. Works for any floating type so that
// gradient oracles can run in extended precision.
template <class T, class F>
std::vector<T> fd_gradient(F&& f, std::vector<T> x, T eps) {
  if (!(eps > T(0))) throw std::invalid_argument("fd_gradient: eps must be positive");
  std::vector<T> grad(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    const T orig = x[j];
    x[j] = orig + eps;
    const T up = f(std::as_const(x));
    x[j] = orig - eps;
    const T down = f(std::as_const(x));
    x[j] = orig;
    if (!std::isfinite(static_cast<long double>(up)) || !std::isfinite(static_cast<long double>(down))) {
      throw std::domain_error("fd_gradient: non-finite function value at coordinate " + std::to_string(j));
    }
    grad[j] = (up - down) / (T(2) * eps);
  }
  return grad;
}

}  // namespace aam::numeric
