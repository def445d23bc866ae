#include "aam/numeric/ops.hpp"

#include <algorithm>

#include "aam/numeric/kernels.hpp"

namespace aam::numeric {

Activation activation_from_string(std::string_view name) {
  if (name == "relu") return Activation::relu;
  if (name == "tanh") return Activation::tanh;
  if (name == "sigmoid") return Activation::sigmoid;
  throw std::invalid_argument("unknown activation '" + std::string(name) + "'");
}

std::string_view to_string(Activation kind) {
  switch (kind) {
    case Activation::relu:
      return "relu";
    case Activation::tanh:
      return "tanh";
    case Activation::sigmoid:
      return "sigmoid";
  }
  throw std::invalid_argument("unknown activation kind");
}

Vector matvec(const Matrix& w, std::span<const double> x) {
  if (w.cols() != x.size()) {
    throw std::invalid_argument("matvec: matrix " + shape_string(w.rows(), w.cols()) +
                                " cannot multiply vector of length " + std::to_string(x.size()));
  }
  Vector out(w.rows());
  if (w.rows() == 0) return out;
  kernels::active().matmul_nt(x.data(), w.values().data(), nullptr, out.data(), 1, w.cols(), w.rows());
  return out;
}

Vector activation(Activation kind, std::span<const double> v) {
  Vector out(v.begin(), v.end());
  switch (kind) {
    case Activation::relu:
      for (double& x : out) x = x > 0.0 ? x : 0.0;
      break;
    case Activation::tanh:
      for (double& x : out) x = std::tanh(x);
      break;
    case Activation::sigmoid:
      for (double& x : out) x = sigmoid(x);
      break;
    default:
      throw std::invalid_argument("activation: unknown kind");
  }
  return out;
}

double activation_derivative_from_output(Activation kind, double y) {
  switch (kind) {
    case Activation::relu:
      return y > 0.0 ? 1.0 : 0.0;
    case Activation::tanh:
      return 1.0 - y * y;
    case Activation::sigmoid:
      return y * (1.0 - y);
  }
  throw std::invalid_argument("activation_derivative_from_output: unknown kind");
}

void softmax_inplace(std::span<double> v) {
  if (v.empty()) throw std::invalid_argument("softmax: empty input");
  const double m = *std::max_element(v.begin(), v.end());
  double total = 0.0;
  for (double& x : v) {
    x = std::exp(x - m);
    total += x;
  }
  for (double& x : v) x /= total;
}

Vector softmax(std::span<const double> v) {
  Vector out(v.begin(), v.end());
  softmax_inplace(out);
  return out;
}

void glorot_uniform(std::span<double> out, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  std::uniform_real_distribution<double> dist(-limit, limit);
  for (double& x : out) x = dist(rng);
}

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace aam::numeric
