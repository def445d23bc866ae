#pragma once

// Plain-loop re-implementation of the attentive aggregation forward pass and
// loss, templated on the scalar type so gradient checks can run in long double.
// Reads the flat parameter vector through ParamLayout but shares no math with
// the library.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "aam/dataset/features.hpp"
#include "aam/model/attentive_aggregation.hpp"

namespace aam::test {

template <class T>
struct ReferenceForward {
  T logit = 0;
  std::vector<T> attention;
  std::vector<T> pooled;
  T kink_margin = std::numeric_limits<T>::infinity();  // smallest |pre-activation| of any relu
};

template <class T>
ReferenceForward<T> reference_forward(const model::Hyperparams& h, const model::ParamLayout& lay,
                                      const std::vector<T>& p, const dataset::FeatureSequence& fs,
                                      const std::optional<dataset::Demographics>& demo) {
  ReferenceForward<T> out;
  const std::size_t k = fs.count();
  const auto n = static_cast<std::size_t>(h.hidden_units);

  std::vector<std::vector<T>> hid(k);
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<T> x(fs.row(i).begin(), fs.row(i).end());
    for (const auto& d : lay.encoder) {
      std::vector<T> y(d.out);
      for (std::size_t o = 0; o < d.out; ++o) {
        T z = p[d.bias + o];
        for (std::size_t j = 0; j < d.in; ++j) z += p[d.weight + o * d.in + j] * x[j];
        out.kink_margin = std::min(out.kink_margin, std::abs(z));
        y[o] = z > 0 ? z : T(0);
      }
      x = std::move(y);
    }
    hid[i] = std::move(x);
  }

  std::vector<T> e(k);
  for (std::size_t i = 0; i < k; ++i) {
    T s = 0;
    for (std::size_t r = 0; r < n; ++r) {
      T v = p[lay.attention_bias + r];
      for (std::size_t c = 0; c < n; ++c) v += p[lay.attention_weight + r * n + c] * hid[i][c];
      s += std::tanh(v) * p[lay.query + r];
    }
    e[i] = s;
  }
  const T mx = *std::max_element(e.begin(), e.end());
  T denom = 0;
  for (auto& v : e) denom += (v = std::exp(v - mx));
  out.attention.resize(k);
  for (std::size_t i = 0; i < k; ++i) out.attention[i] = e[i] / denom;

  out.pooled.assign(n, T(0));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t c = 0; c < n; ++c) out.pooled[c] += out.attention[i] * hid[i][c];
  }

  std::vector<T> in = out.pooled;
  if (h.use_demographics) {
    in.push_back(static_cast<T>(demo->age));
    in.push_back(static_cast<T>(demo->sex));
  }
  const auto& hh = lay.head_hidden;
  const auto& ho = lay.head_output;
  T logit = p[ho.bias];
  for (std::size_t o = 0; o < hh.out; ++o) {
    T z = p[hh.bias + o];
    for (std::size_t j = 0; j < hh.in; ++j) z += p[hh.weight + o * hh.in + j] * in[j];
    out.kink_margin = std::min(out.kink_margin, std::abs(z));
    logit += p[ho.weight + o] * (z > 0 ? z : T(0));
  }
  out.logit = logit;
  return out;
}

// Mean BCE over the batch plus the L2 term on weight matrices and the query.
template <class T>
T reference_loss(const model::Hyperparams& h, const model::ParamLayout& lay, const std::vector<T>& p,
                 const std::vector<const dataset::Sample*>& batch, T* kink_margin = nullptr) {
  T total = 0;
  T margin = std::numeric_limits<T>::infinity();
  for (const auto* s : batch) {
    std::optional<dataset::Demographics> demo;
    if (h.use_demographics) demo = s->demographics;
    const auto f = reference_forward<T>(h, lay, p, s->features, demo);
    margin = std::min(margin, f.kink_margin);
    const T z = f.logit;
    // log(1 + e^z) - y z
    const T sp = z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
    total += sp - (s->label ? z : T(0));
  }
  T loss = total / static_cast<T>(batch.size());
  const auto n = static_cast<std::size_t>(h.hidden_units);
  std::vector<std::pair<std::size_t, std::size_t>> weights;
  for (const auto& d : lay.encoder) weights.emplace_back(d.weight, d.out * d.in);
  weights.emplace_back(lay.attention_weight, n * n);
  weights.emplace_back(lay.query, n);
  weights.emplace_back(lay.head_hidden.weight, lay.head_hidden.out * lay.head_hidden.in);
  weights.emplace_back(lay.head_output.weight, lay.head_output.in);
  T l2 = 0;
  for (auto [b, len] : weights) {
    for (std::size_t i = b; i < b + len; ++i) l2 += p[i] * p[i];
  }
  if (kink_margin) *kink_margin = margin;
  return loss + static_cast<T>(h.l2) * l2;
}

}  // namespace aam::test
