#include "aam/training/search.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "aam/common/parallel.hpp"
#include "aam/evaluation/metrics.hpp"

namespace aam::training {
namespace {

template <class T, std::size_t N>
T pick(Rng& rng, const std::array<T, N>& choices) {
  std::uniform_int_distribution<std::size_t> d(0, N - 1);
  return choices[d(rng)];
}

double auc_or_nan(const std::vector<double>& scores, const std::vector<int>& labels) {
  if (!evaluation::has_both_classes(labels)) return std::numeric_limits<double>::quiet_NaN();
  return evaluation::roc_auc(scores, labels);
}

// NaN-safe "a is better than b" on (auc desc, loss asc).
bool better(double auc_a, double loss_a, double auc_b, double loss_b) {
  const double a = std::isnan(auc_a) ? -1.0 : auc_a;
  const double b = std::isnan(auc_b) ? -1.0 : auc_b;
  if (a != b) return a > b;
  return loss_a < loss_b;
}

}  // namespace

AamCandidate sample_aam_candidate(Rng& rng, bool use_demographics) {
  AamCandidate c;
  c.hyper.hidden_units = pick(rng, std::array{16, 32, 64, 128});
  c.batch_size = pick(rng, std::array{16, 32, 64});
  c.hyper.l2 = pick(rng, std::array{1e-4, 1e-5, 0.0});
  c.hyper.layers = pick(rng, std::array{1, 2, 3});
  c.hyper.dropout = std::uniform_real_distribution<double>(0.0, 0.35)(rng);
  c.hyper.use_demographics = use_demographics;
  return c;
}

std::vector<AamCandidate> sample_aam_candidates(int budget, std::uint64_t seed, bool use_demographics) {
  if (budget < 1) throw std::invalid_argument("search budget must be >= 1");
  Rng rng(derive_seed(seed, "aam-search-space"));
  std::vector<AamCandidate> out;
  for (int i = 0; i < budget; ++i) out.push_back(sample_aam_candidate(rng, use_demographics));
  return out;
}

AamSearchResult random_search_aam(const std::vector<dataset::Sample>& train,
                                  const std::vector<dataset::Sample>& validation, bool use_demographics,
                                  const SearchOptions& options) {
  const auto candidates = sample_aam_candidates(options.budget, options.seed, use_demographics);
  const auto val_labels = labels_of(validation);
  std::vector<std::optional<TrainResult>> results(candidates.size());
  std::vector<AamTrial> trials(candidates.size());

  parallel_for(candidates.size(), options.threads, [&](std::size_t i) {
    TrainConfig tc;
    tc.batch_size = candidates[i].batch_size;
    tc.max_epochs = options.max_epochs;
    tc.patience = options.patience;
    tc.seed = derive_seed(options.seed, "aam-trial", i);
    TrainResult r = train_aam(train, validation, candidates[i].hyper, tc);
    AamTrial& t = trials[i];
    t.index = static_cast<int>(i);
    t.candidate = candidates[i];
    t.seed = tc.seed;
    t.val_auc = auc_or_nan(predict_scores(r.model, validation), val_labels);
    t.val_loss = r.best_val_loss;
    t.epochs = static_cast<int>(r.history.size());
    t.best_epoch = r.best_epoch;
    t.diverged = r.diverged;
    results[i] = std::move(r);
  });

  std::size_t best = 0;
  for (std::size_t i = 1; i < trials.size(); ++i) {
    if (better(trials[i].val_auc, trials[i].val_loss, trials[best].val_auc, trials[best].val_loss)) best = i;
  }
  return {trials[best], trials, std::move(*results[best])};
}

baselines::RFConfig sample_rf_config(Rng& rng) {
  baselines::RFConfig c;
  c.max_depth = pick(rng, std::array{3, 4, 5});
  c.n_trees = pick(rng, std::array{32, 64, 128, 256});
  return c;
}

std::vector<baselines::RFSample> rf_samples(const std::vector<dataset::Sample>& samples) {
  std::vector<baselines::RFSample> out;
  out.reserve(samples.size());
  for (const auto& s : samples) {
    out.push_back({s.demographics.age * 100.0, static_cast<int>(s.demographics.sex), s.label});
  }
  return out;
}

RfSearchResult random_search_rf(const std::vector<dataset::Sample>& train,
                                const std::vector<dataset::Sample>& validation, const SearchOptions& options) {
  if (options.budget < 1) throw std::invalid_argument("search budget must be >= 1");
  const auto train_rows = rf_samples(train);
  const auto val_rows = rf_samples(validation);
  const auto val_labels = labels_of(validation);
  Rng rng(derive_seed(options.seed, "rf-search-space"));
  std::vector<baselines::RFConfig> configs;
  for (int i = 0; i < options.budget; ++i) {
    auto c = sample_rf_config(rng);
    c.seed = derive_seed(options.seed, "rf-trial", static_cast<std::uint64_t>(i));
    configs.push_back(c);
  }
  std::vector<RfTrial> trials(configs.size());
  std::vector<baselines::RandomForest> forests(configs.size());
  parallel_for(configs.size(), options.threads, [&](std::size_t i) {
    forests[i] = baselines::fit_random_forest(train_rows, configs[i]);
    std::vector<double> scores;
    for (const auto& r : val_rows) scores.push_back(forests[i].predict(r.age, r.sex));
    trials[i] = {static_cast<int>(i), configs[i], auc_or_nan(scores, val_labels)};
  });
  std::size_t best = 0;
  for (std::size_t i = 1; i < trials.size(); ++i) {
    if (better(trials[i].val_auc, 0.0, trials[best].val_auc, 0.0)) best = i;
  }
  return {trials[best], trials, std::move(forests[best])};
}

}  // namespace aam::training
