#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "aam/baselines/random_forest.hpp"
#include "aam/training/trainer.hpp"

namespace aam::training {

// One draw from the AAM search space: N, B, s uniformly over their discrete
// choices, L uniformly over {1, 2, 3}, p uniformly over [0, 0.35].
struct AamCandidate {
  model::Hyperparams hyper;
  int batch_size = 32;
};

AamCandidate sample_aam_candidate(Rng& rng, bool use_demographics);

// The first `budget` candidates the search will try under `seed`.
std::vector<AamCandidate> sample_aam_candidates(int budget, std::uint64_t seed, bool use_demographics);

struct AamTrial {
  int index = 0;
  AamCandidate candidate;
  std::uint64_t seed = 0;
  double val_auc = 0.0;
  double val_loss = 0.0;
  int epochs = 0;
  int best_epoch = 0;
  bool diverged = false;
};

struct AamSearchResult {
  AamTrial best;
  std::vector<AamTrial> trials;
  TrainResult best_result;
};

struct SearchOptions {
  int budget = 50;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  int max_epochs = 300;  // forwarded to TrainConfig
  int patience = 32;
};

// Trains one model per candidate; keeps the highest validation AUC (ties: lower
// validation loss, then lower trial index). Trials are independent and run in
// parallel with per-trial seeds, so the outcome does not depend on `threads`.
AamSearchResult random_search_aam(const std::vector<dataset::Sample>& train,
                                  const std::vector<dataset::Sample>& validation, bool use_demographics,
                                  const SearchOptions& options);

struct RfTrial {
  int index = 0;
  baselines::RFConfig config;
  double val_auc = 0.0;
};

struct RfSearchResult {
  RfTrial best;
  std::vector<RfTrial> trials;
  baselines::RandomForest forest;
};

baselines::RFConfig sample_rf_config(Rng& rng);

std::vector<baselines::RFSample> rf_samples(const std::vector<dataset::Sample>& samples);

// Age+sex forest search; fits only on `train`, selects on `validation`.
RfSearchResult random_search_rf(const std::vector<dataset::Sample>& train,
                                const std::vector<dataset::Sample>& validation, const SearchOptions& options);

}  // namespace aam::training
