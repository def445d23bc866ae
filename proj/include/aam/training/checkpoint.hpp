#pragma once

// Self-describing model container. Layout:
//   "AAMCKPT1" | u32 version | sections...
// Each section is a 4-byte tag, a u64 payload length and the payload. Integers
// and doubles are little-endian (doubles as IEEE-754 binary64).

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "aam/baselines/mean_aggregation.hpp"
#include "aam/baselines/random_forest.hpp"
#include "aam/dataset/features.hpp"
#include "aam/dataset/folds.hpp"
#include "aam/model/attentive_aggregation.hpp"

namespace aam::training {

inline constexpr std::string_view kCheckpointMagic = "AAMCKPT1";
inline constexpr std::uint32_t kCheckpointVersion = 1;

enum class ModelKind { aam, aam_demo, mean_agg, mean_agg_demo, rf_demo };

std::string_view to_string(ModelKind k);
std::optional<ModelKind> parse_model_kind(std::string_view s);

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Checkpoint {
  ModelKind kind = ModelKind::aam_demo;
  std::optional<model::AttentiveAggregationModel> aam;  // aam, aam_demo
  std::uint32_t batch_size = 32;                        // B used to train `aam`
  baselines::MeanAggregation mean_agg;                  // mean_agg
  baselines::MeanAggDemo mean_agg_demo;                 // mean_agg_demo
  baselines::RandomForest forest;                       // rf_demo
  dataset::Normalizer normalizer;
  std::vector<std::string> metric_vocabulary;
  std::uint64_t training_seed = 0;
  double threshold = 0.5;
  std::uint64_t k_max = 250;
  // How the folds were produced, so evaluation can rebuild the test fold.
  std::uint64_t split_seed = 0;
  std::uint64_t min_tests = 20;
  dataset::SplitRatios ratios;
  std::vector<std::string> training_ids;

  bool operator==(const Checkpoint&) const = default;
};

std::vector<std::string> current_metric_vocabulary();

std::string serialize_checkpoint(const Checkpoint& c);

// Throws CheckpointError on bad magic, unsupported version, truncation or malformed sections.
Checkpoint deserialize_checkpoint(std::string_view bytes);

void save_checkpoint(const Checkpoint& c, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

// Model scores for each sample; empty sequences score 0.5.
std::vector<double> score_samples(const Checkpoint& c, const std::vector<dataset::Sample>& samples);

// Per-record attention weights; requires an AAM checkpoint and a non-empty sequence.
model::Prediction predict_with_attention(const Checkpoint& c, const dataset::Sample& s);

}  // namespace aam::training
