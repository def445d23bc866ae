#include "aam/training/pipeline.hpp"

#include "aam/training/threshold.hpp"

namespace aam::training {
namespace {

Checkpoint base_checkpoint(ModelKind kind, const PreparedData& data, std::uint64_t seed) {
  Checkpoint c;
  c.kind = kind;
  c.normalizer = data.normalizer;
  c.metric_vocabulary = current_metric_vocabulary();
  c.training_seed = seed;
  c.k_max = data.config.k_max;
  c.split_seed = data.split_seed;
  c.min_tests = data.config.min_tests;
  c.ratios = data.config.ratios;
  for (const auto& p : data.folds.train.participants) c.training_ids.push_back(p.id);
  return c;
}

void set_threshold(Checkpoint& c, const PreparedData& data) {
  const auto scores = score_samples(c, data.validation);
  const auto labels = labels_of(data.validation);
  c.threshold = select_threshold(scores, labels);
}

}  // namespace

PreparedData prepare_folds(dataset::Folds folds, std::size_t k_max) {
  PreparedData d;
  d.folds = std::move(folds);
  d.config.k_max = k_max;
  d.normalizer = dataset::fit_normalizer(d.folds.train);
  d.train = dataset::make_samples(d.folds.train, d.normalizer, k_max);
  d.validation = dataset::make_samples(d.folds.validation, d.normalizer, k_max);
  d.test = dataset::make_samples(d.folds.test, d.normalizer, k_max);
  return d;
}

PreparedData prepare_data(const dataset::Cohort& raw, std::uint64_t master_seed, const PipelineConfig& cfg) {
  const auto filtered = dataset::filter_min_tests(raw, cfg.min_tests);
  const auto split_seed = derive_seed(master_seed, "split");
  PreparedData d = prepare_folds(dataset::stratified_split(filtered, cfg.ratios, split_seed), cfg.k_max);
  d.split_seed = split_seed;
  d.config = cfg;
  return d;
}

dataset::Folds folds_for_checkpoint(const dataset::Cohort& raw, const Checkpoint& c) {
  const auto filtered = dataset::filter_min_tests(raw, c.min_tests);
  return dataset::stratified_split(filtered, c.ratios, c.split_seed);
}

FitResult fit_model(ModelKind kind, const PreparedData& data, const SearchOptions& options) {
  FitResult r;
  r.checkpoint = base_checkpoint(kind, data, options.seed);
  Checkpoint& c = r.checkpoint;
  switch (kind) {
    case ModelKind::aam:
    case ModelKind::aam_demo: {
      auto s = random_search_aam(data.train, data.validation, kind == ModelKind::aam_demo, options);
      c.aam = std::move(s.best_result.model);
      c.batch_size = static_cast<std::uint32_t>(s.best.candidate.batch_size);
      r.history = std::move(s.best_result.history);
      r.aam_trials = std::move(s.trials);
      break;
    }
    case ModelKind::mean_agg: c.mean_agg = baselines::fit_mean_aggregation(data.validation); break;
    case ModelKind::mean_agg_demo: c.mean_agg_demo = baselines::fit_mean_agg_demo(data.train); break;
    case ModelKind::rf_demo: {
      auto s = random_search_rf(data.train, data.validation, options);
      c.forest = std::move(s.forest);
      r.rf_trials = std::move(s.trials);
      break;
    }
  }
  set_threshold(c, data);
  return r;
}

FitResult fit_aam_fixed(const PreparedData& data, const model::Hyperparams& h, const TrainConfig& tc) {
  FitResult r;
  r.checkpoint = base_checkpoint(h.use_demographics ? ModelKind::aam_demo : ModelKind::aam, data, tc.seed);
  auto t = train_aam(data.train, data.validation, h, tc);
  r.checkpoint.aam = std::move(t.model);
  r.checkpoint.batch_size = static_cast<std::uint32_t>(tc.batch_size);
  r.history = std::move(t.history);
  set_threshold(r.checkpoint, data);
  return r;
}

}  // namespace aam::training
