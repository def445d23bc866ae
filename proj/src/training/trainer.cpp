#include "aam/training/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "aam/common/seed.hpp"
#include "aam/evaluation/metrics.hpp"
#include "aam/training/adam.hpp"
#include "aam/numeric/ops.hpp"
#include "aam/training/early_stopping.hpp"

namespace aam::training {

void TrainConfig::validate() const {
  if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
  if (!(learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be positive");
  if (max_epochs < 1) throw std::invalid_argument("max_epochs must be >= 1");
  if (patience < 1) throw std::invalid_argument("patience must be >= 1");
}

std::vector<int> labels_of(const std::vector<dataset::Sample>& samples) {
  std::vector<int> y;
  y.reserve(samples.size());
  for (const auto& s : samples) y.push_back(s.label);
  return y;
}

std::vector<double> predict_scores(const model::AttentiveAggregationModel& m,
                                   const std::vector<dataset::Sample>& samples) {
  std::vector<double> out;
  out.reserve(samples.size());
  const bool demo = m.hyperparams().use_demographics;
  for (const auto& s : samples) {
    if (s.features.empty()) {
      out.push_back(0.5);
      continue;
    }
    out.push_back(m.predict(s.features, demo ? std::optional(s.demographics) : std::nullopt).score);
  }
  return out;
}

namespace {

std::vector<const dataset::Sample*> non_empty(const std::vector<dataset::Sample>& samples) {
  std::vector<const dataset::Sample*> out;
  for (const auto& s : samples) {
    if (!s.features.empty()) out.push_back(&s);
  }
  return out;
}

}  // namespace

TrainResult train_aam(const std::vector<dataset::Sample>& train, const std::vector<dataset::Sample>& validation,
                      const model::Hyperparams& h, const TrainConfig& tc, const TrainHooks& hooks) {
  tc.validate();
  h.validate();
  const auto train_set = non_empty(train);
  const auto val_set = non_empty(validation);
  if (train_set.empty()) throw std::invalid_argument("train_aam: no non-empty training sequences");
  if (val_set.empty()) throw std::invalid_argument("train_aam: no non-empty validation sequences");

  auto model = model::AttentiveAggregationModel::init(h, derive_seed(tc.seed, "init"));
  Rng shuffle_rng(derive_seed(tc.seed, "shuffle"));
  Rng dropout_rng(derive_seed(tc.seed, "dropout"));
  Adam adam(model.parameters().size(), AdamConfig{tc.learning_rate});
  EarlyStopping stopper(tc.patience);

  const auto val_labels = labels_of(validation);
  const bool val_auc_defined = evaluation::has_both_classes(val_labels);

  TrainResult result{model, {}, 0, 0.0, false, {}};
  std::vector<double> grad(model.parameters().size());
  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<const dataset::Sample*> batch;
  const auto bsz = static_cast<std::size_t>(tc.batch_size);

  for (int epoch = 1; epoch <= tc.max_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    double loss_sum = 0.0;
    std::size_t batches = 0;
    try {
      for (std::size_t start = 0; start < order.size(); start += bsz) {
        batch.clear();
        for (std::size_t i = start; i < std::min(order.size(), start + bsz); ++i) batch.push_back(train_set[order[i]]);
        loss_sum += model.loss_and_gradient(batch, grad, {&dropout_rng});
        ++batches;
        adam.step(model.parameters(), grad);
      }
    } catch (const std::domain_error& e) {
      result.diverged = true;
      result.divergence = "epoch " + std::to_string(epoch) + ": " + e.what();
      break;
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = loss_sum / static_cast<double>(batches);
    rec.val_loss = model.mean_bce(val_set);
    if (hooks.val_loss_override) rec.val_loss = hooks.val_loss_override(epoch, rec.val_loss);
    rec.val_auc = val_auc_defined ? evaluation::roc_auc(predict_scores(model, validation), val_labels)
                                  : std::numeric_limits<double>::quiet_NaN();
    if (!std::isfinite(rec.train_loss) || !std::isfinite(rec.val_loss) ||
        !numeric::all_finite(model.parameters())) {
      result.diverged = true;
      result.divergence = "epoch " + std::to_string(epoch) + ": non-finite loss or parameters";
      break;
    }
    result.history.push_back(rec);
    if (stopper.observe(epoch, rec.val_loss)) result.model = model;
    if (hooks.on_epoch_end) hooks.on_epoch_end(epoch, model);
    if (stopper.should_stop(epoch)) break;
  }

  result.best_epoch = stopper.best_epoch();
  result.best_val_loss = stopper.best_loss();
  return result;
}

void write_history_jsonl(std::ostream& out, const std::vector<EpochRecord>& history) {
  for (const auto& r : history) {
    nlohmann::ordered_json j;
    j["epoch"] = r.epoch;
    j["train_loss"] = r.train_loss;
    j["val_loss"] = r.val_loss;
    j["val_auc"] = std::isfinite(r.val_auc) ? nlohmann::ordered_json(r.val_auc) : nlohmann::ordered_json(nullptr);
    out << j.dump() << '\n';
  }
}

}  // namespace aam::training
