#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "aam/dataset/features.hpp"
#include "aam/model/attentive_aggregation.hpp"

namespace aam::training {

struct TrainConfig {
  int batch_size = 32;         // B
  double learning_rate = 0.003;
  int max_epochs = 300;
  int patience = 32;
  std::uint64_t seed = 0;

  void validate() const;
};

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;
  double val_loss = 0.0;
  double val_auc = 0.0;  // NaN when the validation fold has one class

  bool operator==(const EpochRecord&) const = default;
};

// Test seams. `val_loss_override` replaces the monitored validation loss of an
// epoch; `on_epoch_end` observes the parameters after each epoch's updates.
struct TrainHooks {
  std::function<double(int epoch, double computed)> val_loss_override;
  std::function<void(int epoch, const model::AttentiveAggregationModel&)> on_epoch_end;
};

struct TrainResult {
  model::AttentiveAggregationModel model;  // snapshot from the best validation epoch
  std::vector<EpochRecord> history;
  int best_epoch = 0;
  double best_val_loss = 0.0;
  bool diverged = false;
  std::string divergence;
};

// Minibatch Adam on mean BCE (+ L2), early stopping on validation BCE.
// Initialisation, shuffling and dropout masks all derive from tc.seed.
TrainResult train_aam(const std::vector<dataset::Sample>& train, const std::vector<dataset::Sample>& validation,
                      const model::Hyperparams& h, const TrainConfig& tc, const TrainHooks& hooks = {});

// Inference scores; empty sequences score 0.5.
std::vector<double> predict_scores(const model::AttentiveAggregationModel& m,
                                   const std::vector<dataset::Sample>& samples);

std::vector<int> labels_of(const std::vector<dataset::Sample>& samples);

// One JSON object per line: {"epoch":..,"train_loss":..,"val_loss":..,"val_auc":..}
void write_history_jsonl(std::ostream& out, const std::vector<EpochRecord>& history);

}  // namespace aam::training
