#include "aam/model/attentive_aggregation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "aam/numeric/kernels.hpp"
#include "aam/numeric/ops.hpp"

namespace aam::model {

using dataset::kFeatureDim;
using numeric::Matrix;
using numeric::Vector;

void Hyperparams::validate() const {
  const bool n_ok = hidden_units == 16 || hidden_units == 32 || hidden_units == 64 || hidden_units == 128;
  if (!n_ok) throw std::invalid_argument("hidden_units must be one of 16, 32, 64, 128 (got " + std::to_string(hidden_units) + ")");
  if (layers < 1 || layers > 3) throw std::invalid_argument("layers must be in [1, 3] (got " + std::to_string(layers) + ")");
  if (!(dropout >= 0.0 && dropout <= 0.35)) throw std::invalid_argument("dropout must be in [0, 0.35]");
  if (!(l2 == 0.0 || l2 == 1e-4 || l2 == 1e-5)) throw std::invalid_argument("l2 must be one of 1e-4, 1e-5, 0");
}

std::string Hyperparams::describe() const {
  std::ostringstream os;
  os << "N=" << hidden_units << " L=" << layers << " p=" << dropout << " s=" << l2
     << " demo=" << (use_demographics ? 1 : 0);
  return os.str();
}

ParamLayout ParamLayout::for_hyperparams(const Hyperparams& h) {
  ParamLayout lay;
  const auto n = static_cast<std::size_t>(h.hidden_units);
  std::size_t off = 0;
  auto dense = [&](std::size_t out, std::size_t in) {
    DenseBlock d{off, off + out * in, out, in};
    lay.penalized.emplace_back(off, off + out * in);
    off += out * in + out;
    return d;
  };
  std::size_t in = kFeatureDim;
  for (int l = 0; l < h.layers; ++l) {
    lay.encoder.push_back(dense(n, in));
    in = n;
  }
  lay.attention_weight = off;
  lay.penalized.emplace_back(off, off + n * n);
  off += n * n;
  lay.attention_bias = off;
  off += n;
  lay.query = off;
  lay.penalized.emplace_back(off, off + n);
  off += n;
  lay.head_hidden = dense(n, n + (h.use_demographics ? 2 : 0));
  lay.head_output = dense(1, n);
  lay.total = off;
  return lay;
}

AttentiveAggregationModel::AttentiveAggregationModel(Hyperparams h, std::vector<double> parameters)
    : hyper_(h), layout_(ParamLayout::for_hyperparams(h)), params_(std::move(parameters)) {
  hyper_.validate();
  if (params_.size() != layout_.total) {
    throw std::invalid_argument("parameter vector has " + std::to_string(params_.size()) + " entries, layout " +
                                hyper_.describe() + " needs " + std::to_string(layout_.total));
  }
}

AttentiveAggregationModel AttentiveAggregationModel::init(const Hyperparams& h, std::uint64_t seed) {
  h.validate();
  const ParamLayout lay = ParamLayout::for_hyperparams(h);
  std::vector<double> p(lay.total, 0.0);
  Rng rng(seed);
  auto fill = [&](std::size_t offset, std::size_t out, std::size_t in) {
    numeric::glorot_uniform(std::span<double>(p.data() + offset, out * in), in, out, rng);
  };
  for (const auto& d : lay.encoder) fill(d.weight, d.out, d.in);
  const auto n = static_cast<std::size_t>(h.hidden_units);
  fill(lay.attention_weight, n, n);
  fill(lay.query, 1, n);
  fill(lay.head_hidden.weight, lay.head_hidden.out, lay.head_hidden.in);
  fill(lay.head_output.weight, lay.head_output.out, lay.head_output.in);
  return AttentiveAggregationModel(h, std::move(p));
}

numeric::ConstMatrixView AttentiveAggregationModel::attention_weight() const {
  return {params_.data() + layout_.attention_weight, hidden_units(), hidden_units()};
}
std::span<const double> AttentiveAggregationModel::attention_bias() const {
  return {params_.data() + layout_.attention_bias, hidden_units()};
}
std::span<const double> AttentiveAggregationModel::query() const { return {params_.data() + layout_.query, hidden_units()}; }

double AttentiveAggregationModel::penalty() const {
  if (hyper_.l2 == 0.0) return 0.0;
  double s = 0.0;
  for (auto [b, e] : layout_.penalized) {
    for (std::size_t i = b; i < e; ++i) s += params_[i] * params_[i];
  }
  return hyper_.l2 * s;
}

namespace {

// Per-sample forward state kept for the backward pass.
struct Trace {
  std::size_t k = 0;
  std::vector<Matrix> activations;  // [0] unused (input is the feature matrix), [l+1] output of layer l
  std::vector<Matrix> gates;        // d(act)/d(pre-act): relu indicator times dropout scale
  Matrix projected;                 // U = tanh(V), k x N
  Vector attention;                 // a
  Vector pooled;                    // h_all
  Vector head_input;                // [h_all, demo]
  Vector head_pre;                  // z1
  Vector head_act;                  // relu(z1)
  double logit = 0.0;
};

const double* input_rows(const dataset::FeatureSequence& fs) { return fs.values.values().data(); }

void forward(const AttentiveAggregationModel& m, const dataset::FeatureSequence& fs,
             const std::optional<dataset::Demographics>& demo, Rng* dropout_rng, Trace& t) {
  const auto& h = m.hyperparams();
  const auto& lay = m.layout();
  const auto& kt = numeric::kernels::active();
  const std::size_t n = m.hidden_units();
  const std::size_t k = fs.count();
  const double* params = m.parameters().data();
  if (k == 0) throw std::invalid_argument("predict: empty feature sequence");
  if (fs.values.cols() != kFeatureDim) {
    throw std::invalid_argument("predict: feature width " + std::to_string(fs.values.cols()) + ", expected " +
                                std::to_string(kFeatureDim));
  }
  if (h.use_demographics != demo.has_value()) {
    throw std::invalid_argument(h.use_demographics ? "predict: demographics required by this model"
                                                   : "predict: model does not take demographics");
  }
  t.k = k;
  const std::size_t layers = lay.encoder.size();
  t.activations.resize(layers + 1);
  t.gates.resize(layers);

  const bool drop = dropout_rng != nullptr && h.dropout > 0.0;
  const double keep = 1.0 - h.dropout;
  // Each 64-bit draw yields two keep decisions: a 32-bit chunk u keeps the unit iff u < keep * 2^32.
  const auto keep_below = static_cast<std::uint64_t>(std::ldexp(keep, 32));
  std::uint64_t bits = 0;
  int bits_left = 0;
  auto keep_unit = [&] {
    if (bits_left == 0) {
      bits = (*dropout_rng)();
      bits_left = 2;
    }
    const std::uint64_t u = bits & 0xffffffffULL;
    bits >>= 32;
    --bits_left;
    return u < keep_below;
  };

  const double* in = input_rows(fs);
  for (std::size_t l = 0; l < layers; ++l) {
    const DenseBlock& d = lay.encoder[l];
    Matrix& z = t.activations[l + 1];
    Matrix& g = t.gates[l];
    if (z.rows() != k || z.cols() != n) z = Matrix(k, n);
    if (g.rows() != k || g.cols() != n) g = Matrix(k, n);
    kt.matmul_nt(in, params + d.weight, params + d.bias, z.values().data(), k, d.in, d.out);
    auto zv = z.values();
    auto gv = g.values();
    for (std::size_t i = 0; i < zv.size(); ++i) {
      double gate = zv[i] > 0.0 ? 1.0 : 0.0;
      if (drop) gate = keep_unit() ? gate / keep : 0.0;
      gv[i] = gate;
      zv[i] *= gate;
    }
    in = z.values().data();
  }
  const Matrix& hidden = t.activations[layers];

  if (t.projected.rows() != k || t.projected.cols() != n) t.projected = Matrix(k, n);
  kt.matmul_nt(hidden.values().data(), params + lay.attention_weight, params + lay.attention_bias,
               t.projected.values().data(), k, n, n);
  for (double& v : t.projected.values()) v = std::tanh(v);

  t.attention.resize(k);
  const double* query = params + lay.query;
  for (std::size_t i = 0; i < k; ++i) t.attention[i] = kt.dot(t.projected.row(i).data(), query, n);
  numeric::softmax_inplace(t.attention);

  t.pooled.assign(n, 0.0);
  for (std::size_t i = 0; i < k; ++i) kt.axpy(t.attention[i], hidden.row(i).data(), t.pooled.data(), n);

  t.head_input = t.pooled;
  if (demo) {
    t.head_input.push_back(demo->age);
    t.head_input.push_back(demo->sex);
  }
  const DenseBlock& hh = lay.head_hidden;
  t.head_pre.resize(hh.out);
  kt.matmul_nt(t.head_input.data(), params + hh.weight, params + hh.bias, t.head_pre.data(), 1, hh.in, hh.out);
  t.head_act.resize(hh.out);
  for (std::size_t j = 0; j < hh.out; ++j) t.head_act[j] = t.head_pre[j] > 0.0 ? t.head_pre[j] : 0.0;
  const DenseBlock& ho = lay.head_output;
  t.logit = params[ho.bias] + kt.dot(params + ho.weight, t.head_act.data(), ho.in);
}

// Accumulates scale * d(bce)/d(params) for one traced sample into grad.
void backward(const AttentiveAggregationModel& m, const dataset::FeatureSequence& fs, const Trace& t, double dlogit,
              double* grad) {
  const auto& lay = m.layout();
  const auto& kt = numeric::kernels::active();
  const std::size_t n = m.hidden_units();
  const std::size_t k = t.k;
  const double* params = m.parameters().data();
  const std::size_t layers = lay.encoder.size();

  const DenseBlock& ho = lay.head_output;
  grad[ho.bias] += dlogit;
  kt.axpy(dlogit, t.head_act.data(), grad + ho.weight, ho.in);

  const DenseBlock& hh = lay.head_hidden;
  Vector dz1(hh.out);
  for (std::size_t j = 0; j < hh.out; ++j) dz1[j] = t.head_pre[j] > 0.0 ? dlogit * params[ho.weight + j] : 0.0;
  kt.matmul_tn_acc(dz1.data(), t.head_input.data(), grad + hh.weight, 1, hh.out, hh.in);
  kt.axpy(1.0, dz1.data(), grad + hh.bias, hh.out);
  Vector dinput(hh.in, 0.0);
  kt.matmul_nn_acc(dz1.data(), params + hh.weight, dinput.data(), 1, hh.out, hh.in);
  // dinput[0..n) is d/d h_all; the demographic tail is an input, not a parameter.

  const Matrix& hidden = t.activations[layers];
  Matrix dhidden(k, n);
  Vector dscore(k);
  for (std::size_t i = 0; i < k; ++i) {
    kt.axpy(t.attention[i], dinput.data(), dhidden.row(i).data(), n);
    dscore[i] = kt.dot(hidden.row(i).data(), dinput.data(), n);
  }
  // softmax Jacobian: de_i = a_i (da_i - sum_j a_j da_j)
  double weighted = 0.0;
  for (std::size_t i = 0; i < k; ++i) weighted += t.attention[i] * dscore[i];
  Matrix dproj_pre(k, n);
  const double* query = params + lay.query;
  for (std::size_t i = 0; i < k; ++i) {
    const double de = t.attention[i] * (dscore[i] - weighted);
    if (de == 0.0) continue;
    auto u = t.projected.row(i);
    kt.axpy(de, u.data(), grad + lay.query, n);
    auto dv = dproj_pre.row(i);
    for (std::size_t j = 0; j < n; ++j) dv[j] = de * query[j] * (1.0 - u[j] * u[j]);
  }
  kt.matmul_tn_acc(dproj_pre.values().data(), hidden.values().data(), grad + lay.attention_weight, k, n, n);
  for (std::size_t i = 0; i < k; ++i) kt.axpy(1.0, dproj_pre.row(i).data(), grad + lay.attention_bias, n);
  kt.matmul_nn_acc(dproj_pre.values().data(), params + lay.attention_weight, dhidden.values().data(), k, n, n);

  Matrix dprev;
  for (std::size_t l = layers; l-- > 0;) {
    const DenseBlock& d = lay.encoder[l];
    auto dz = dhidden.values();
    const auto gate = t.gates[l].values();
    for (std::size_t i = 0; i < dz.size(); ++i) dz[i] *= gate[i];
    const double* in = l == 0 ? input_rows(fs) : t.activations[l].values().data();
    kt.matmul_tn_acc(dz.data(), in, grad + d.weight, k, d.out, d.in);
    for (std::size_t i = 0; i < k; ++i) kt.axpy(1.0, dhidden.row(i).data(), grad + d.bias, d.out);
    if (l > 0) {
      dprev = Matrix(k, d.in);
      kt.matmul_nn_acc(dz.data(), params + d.weight, dprev.values().data(), k, d.out, d.in);
      std::swap(dhidden, dprev);
    }
  }
}

std::optional<dataset::Demographics> demo_for(const AttentiveAggregationModel& m, const dataset::Sample& s) {
  if (m.hyperparams().use_demographics) return s.demographics;
  return std::nullopt;
}

double bce_from_logit(double logit, int label) { return numeric::softplus(logit) - (label ? logit : 0.0); }

}  // namespace

Vector AttentiveAggregationModel::encode(std::span<const double> x) const {
  if (x.size() != kFeatureDim) {
    throw std::invalid_argument("encode: feature vector has length " + std::to_string(x.size()) + ", expected " +
                                std::to_string(kFeatureDim));
  }
  dataset::FeatureSequence fs{Matrix(1, kFeatureDim, std::vector<double>(x.begin(), x.end()))};
  Matrix h = encode_all(fs);
  return Vector(h.values().begin(), h.values().end());
}

Matrix AttentiveAggregationModel::encode_all(const dataset::FeatureSequence& fs) const {
  const auto& kt = numeric::kernels::active();
  const std::size_t n = hidden_units();
  const std::size_t k = fs.count();
  if (fs.values.cols() != kFeatureDim) throw std::invalid_argument("encode: feature width mismatch");
  Matrix cur = fs.values;
  for (const auto& d : layout_.encoder) {
    Matrix next(k, n);
    kt.matmul_nt(cur.values().data(), params_.data() + d.weight, params_.data() + d.bias, next.values().data(), k,
                 d.in, d.out);
    for (double& v : next.values()) v = v > 0.0 ? v : 0.0;
    cur = std::move(next);
  }
  return cur;
}

AttentionResult AttentiveAggregationModel::attend(const Matrix& hidden) const {
  const auto& kt = numeric::kernels::active();
  const std::size_t n = hidden_units();
  const std::size_t k = hidden.rows();
  if (k == 0) throw std::invalid_argument("attend: no hidden representations");
  if (hidden.cols() != n) {
    throw std::invalid_argument("attend: hidden width " + std::to_string(hidden.cols()) + ", expected " +
                                std::to_string(n));
  }
  Matrix proj(k, n);
  kt.matmul_nt(hidden.values().data(), params_.data() + layout_.attention_weight,
               params_.data() + layout_.attention_bias, proj.values().data(), k, n, n);
  AttentionResult r;
  r.attention.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    auto u = proj.row(i);
    for (double& v : u) v = std::tanh(v);
    r.attention[i] = kt.dot(u.data(), params_.data() + layout_.query, n);
  }
  numeric::softmax_inplace(r.attention);
  r.pooled.assign(n, 0.0);
  for (std::size_t i = 0; i < k; ++i) kt.axpy(r.attention[i], hidden.row(i).data(), r.pooled.data(), n);
  return r;
}

Prediction AttentiveAggregationModel::predict(const dataset::FeatureSequence& fs,
                                              const std::optional<dataset::Demographics>& demo) const {
  Trace t;
  forward(*this, fs, demo, nullptr, t);
  return {numeric::sigmoid(t.logit), std::move(t.attention)};
}

double AttentiveAggregationModel::loss_and_gradient(std::span<const dataset::Sample* const> batch,
                                                    std::span<double> grad, DropoutContext dropout) const {
  if (batch.empty()) throw std::invalid_argument("loss_and_gradient: empty batch");
  if (grad.size() != params_.size()) throw std::invalid_argument("loss_and_gradient: gradient size mismatch");
  std::fill(grad.begin(), grad.end(), 0.0);
  const double scale = 1.0 / static_cast<double>(batch.size());
  double total = 0.0;
  Trace t;
  for (const dataset::Sample* s : batch) {
    forward(*this, s->features, demo_for(*this, *s), dropout.rng, t);
    total += bce_from_logit(t.logit, s->label);
    const double dlogit = (numeric::sigmoid(t.logit) - static_cast<double>(s->label)) * scale;
    backward(*this, s->features, t, dlogit, grad.data());
  }
  double loss = total * scale;
  if (hyper_.l2 != 0.0) {
    for (auto [b, e] : layout_.penalized) {
      for (std::size_t i = b; i < e; ++i) {
        loss += hyper_.l2 * params_[i] * params_[i];
        grad[i] += 2.0 * hyper_.l2 * params_[i];
      }
    }
  }
  if (!std::isfinite(loss)) {
    throw std::domain_error("loss_and_gradient: non-finite loss (" + std::to_string(loss) + ") for model " +
                            hyper_.describe());
  }
  return loss;
}

double AttentiveAggregationModel::mean_bce(std::span<const dataset::Sample* const> batch) const {
  if (batch.empty()) throw std::invalid_argument("mean_bce: empty batch");
  double total = 0.0;
  Trace t;
  for (const dataset::Sample* s : batch) {
    forward(*this, s->features, demo_for(*this, *s), nullptr, t);
    total += bce_from_logit(t.logit, s->label);
  }
  return total / static_cast<double>(batch.size());
}

}  // namespace aam::model
