#pragma once

// Attentive aggregation model: a per-test MLP encoder, a global soft-attention
// pooling step over the encoded tests, and a small MLP head with a sigmoid
// output that optionally sees the participant's age and sex.
//
//   h_i   = relu-MLP(x_i)                      (L layers, N units, inverted dropout)
//   u_i   = tanh(W h_i + b)
//   a     = softmax_i(u_i . u_max)
//   h_all = sum_i a_i h_i
//   y     = sigmoid(w_out . relu(W_head [h_all, age, sex] + b_head) + b_out)
//
// All parameters live in one flat vector; ParamLayout maps each block to its
// offset so optimisers and checkpoints can treat the model as a single array.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aam/common/seed.hpp"
#include "aam/dataset/features.hpp"
#include "aam/numeric/matrix.hpp"

namespace aam::model {

struct Hyperparams {
  int hidden_units = 32;       // N
  int layers = 1;              // L
  double dropout = 0.0;        // p
  double l2 = 0.0;             // s
  bool use_demographics = true;

  // Throws std::invalid_argument if outside the supported search ranges.
  void validate() const;
  std::string describe() const;

  bool operator==(const Hyperparams&) const = default;
};

struct DenseBlock {
  std::size_t weight = 0;  // offset of out x in row-major weights
  std::size_t bias = 0;
  std::size_t out = 0;
  std::size_t in = 0;
};

struct ParamLayout {
  std::vector<DenseBlock> encoder;
  std::size_t attention_weight = 0;  // N x N
  std::size_t attention_bias = 0;    // N
  std::size_t query = 0;             // u_max, N
  DenseBlock head_hidden;            // (N [+2]) -> N
  DenseBlock head_output;            // N -> 1
  std::size_t total = 0;

  // [begin, end) ranges that carry the L2 penalty: every weight matrix and u_max.
  std::vector<std::pair<std::size_t, std::size_t>> penalized;

  static ParamLayout for_hyperparams(const Hyperparams& h);
};

struct Prediction {
  double score = 0.5;
  std::vector<double> attention;
};

struct AttentionResult {
  numeric::Vector pooled;     // h_all
  numeric::Vector attention;  // a
};

// Source of inverted-dropout masks during training. Inference never uses one.
struct DropoutContext {
  Rng* rng = nullptr;
};

class AttentiveAggregationModel {
 public:
  AttentiveAggregationModel(Hyperparams h, std::vector<double> parameters);

  // Glorot-uniform weights (u_max initialised like a weight row), zero biases.
  static AttentiveAggregationModel init(const Hyperparams& h, std::uint64_t seed);

  const Hyperparams& hyperparams() const { return hyper_; }
  const ParamLayout& layout() const { return layout_; }
  std::span<const double> parameters() const { return params_; }
  std::span<double> parameters() { return params_; }
  std::size_t hidden_units() const { return static_cast<std::size_t>(hyper_.hidden_units); }

  numeric::ConstMatrixView block(const DenseBlock& d) const { return {params_.data() + d.weight, d.out, d.in}; }
  std::span<const double> bias(const DenseBlock& d) const { return {params_.data() + d.bias, d.out}; }
  numeric::ConstMatrixView attention_weight() const;
  std::span<const double> attention_bias() const;
  std::span<const double> query() const;

  // h_i for one feature vector (inference mode). Throws on length != kFeatureDim.
  numeric::Vector encode(std::span<const double> x) const;

  // Encodes every row of a sequence (inference mode): k x N.
  numeric::Matrix encode_all(const dataset::FeatureSequence& fs) const;

  // Attention pooling over hidden rows (k x N). Throws on k == 0 or width != N.
  AttentionResult attend(const numeric::Matrix& hidden) const;

  // Inference-mode forward pass. `demo` must be present iff use_demographics.
  Prediction predict(const dataset::FeatureSequence& fs, const std::optional<dataset::Demographics>& demo) const;

  // Mean BCE over the batch plus s * sum of squared penalised parameters.
  // Writes d(loss)/d(params) into `grad` (overwritten, size == parameters().size()).
  // Dropout is applied only when `dropout.rng` is set. Throws std::domain_error on a non-finite loss.
  double loss_and_gradient(std::span<const dataset::Sample* const> batch, std::span<double> grad,
                           DropoutContext dropout = {}) const;

  // Mean BCE in inference mode, without the penalty (the validation loss).
  double mean_bce(std::span<const dataset::Sample* const> batch) const;

  double penalty() const;

  bool operator==(const AttentiveAggregationModel& o) const {
    return hyper_ == o.hyper_ && params_ == o.params_;
  }

 private:
  Hyperparams hyper_;
  ParamLayout layout_;
  std::vector<double> params_;
};

}  // namespace aam::model
