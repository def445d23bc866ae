#pragma once

#include <cstdint>
#include <vector>

#include "aam/dataset/folds.hpp"
#include "aam/training/checkpoint.hpp"
#include "aam/training/search.hpp"

namespace aam::training {

struct PipelineConfig {
  std::size_t min_tests = 20;
  dataset::SplitRatios ratios;
  std::size_t k_max = 250;
};

struct PreparedData {
  dataset::Folds folds;
  dataset::Normalizer normalizer;  // fit on folds.train only
  std::vector<dataset::Sample> train;
  std::vector<dataset::Sample> validation;
  std::vector<dataset::Sample> test;
  std::uint64_t split_seed = 0;
  PipelineConfig config;
};

// filter(min_tests) -> stratified split (seed derived from master_seed) -> normalizer on train -> samples.
PreparedData prepare_data(const dataset::Cohort& raw, std::uint64_t master_seed, const PipelineConfig& cfg = {});

// Same steps for already split folds (e.g. after removing a test type).
PreparedData prepare_folds(dataset::Folds folds, std::size_t k_max);

// Rebuilds the test fold a checkpoint was evaluated against.
dataset::Folds folds_for_checkpoint(const dataset::Cohort& raw, const Checkpoint& c);

struct FitResult {
  Checkpoint checkpoint;
  std::vector<EpochRecord> history;  // AAM kinds only
  std::vector<AamTrial> aam_trials;
  std::vector<RfTrial> rf_trials;
};

// Fits `kind` on the training fold, selects hyperparameters/orientation and the
// F1 threshold on the validation fold. Never touches the test fold.
FitResult fit_model(ModelKind kind, const PreparedData& data, const SearchOptions& options);

// Trains an AAM with fixed hyperparameters and wraps it as a checkpoint with a validation threshold.
FitResult fit_aam_fixed(const PreparedData& data, const model::Hyperparams& h, const TrainConfig& tc);

}  // namespace aam::training
