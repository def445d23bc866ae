#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <set>
#include <sstream>

#include "aam/common/log.hpp"
#include "aam/numeric/ops.hpp"
#include "aam/synth/generator.hpp"
#include "aam/training/adam.hpp"
#include "aam/training/checkpoint.hpp"
#include "aam/training/early_stopping.hpp"
#include "aam/training/pipeline.hpp"
#include "aam/training/search.hpp"
#include "aam/training/threshold.hpp"
#include "aam/training/trainer.hpp"
#include "test_support.hpp"

using namespace aam;
using namespace aam::training;

namespace {

model::Hyperparams small_hyper(bool demo) {
  model::Hyperparams h;
  h.hidden_units = 16;
  h.layers = 1;
  h.dropout = 0.1;
  h.l2 = 1e-5;
  h.use_demographics = demo;
  return h;
}

// Small prepared cohort shared by the training tests.
const PreparedData& small_data() {
  static const PreparedData data = [] {
    auto cfg = test::small_synth_config(120, 21);
    return prepare_data(synth::generate_cohort(cfg), 3, {20, {}, 60});
  }();
  return data;
}

std::string bytes_with_section_patch(std::string bytes, std::string_view tag, std::uint64_t extra) {
  // Walks the section list and bumps the length field of `tag` by `extra`.
  std::size_t pos = 12;
  while (pos + 12 <= bytes.size()) {
    std::uint64_t len = 0;
    std::memcpy(&len, bytes.data() + pos + 4, 8);
    if (bytes.compare(pos, 4, tag) == 0) {
      len += extra;
      std::memcpy(bytes.data() + pos + 4, &len, 8);
      return bytes;
    }
    pos += 12 + len;
  }
  FAIL("section not found");
  return bytes;
}

}  // namespace

TEST_CASE("adam first step moves each coordinate by the learning rate against its gradient") {
  Adam adam(3, {});
  std::vector<double> p{1.0, -2.0, 0.5};
  const std::vector<double> g{0.3, -7.0, 0.0};
  adam.step(p, g);
  CHECK(p[0] == doctest::Approx(1.0 - 0.003).epsilon(1e-6));
  CHECK(p[1] == doctest::Approx(-2.0 + 0.003).epsilon(1e-6));
  CHECK(p[2] == 0.5);
  CHECK(adam.steps() == 1);
}

TEST_CASE("adam matches a hand-rolled moment recursion") {
  std::mt19937_64 rng(2);
  Adam adam(4, {});
  std::vector<double> p = test::random_vector(rng, 4), q = p, m(4, 0.0), v(4, 0.0);
  for (int t = 1; t <= 50; ++t) {
    const auto g = test::random_vector(rng, 4);
    adam.step(p, g);
    for (std::size_t i = 0; i < 4; ++i) {
      m[i] = 0.9 * m[i] + 0.1 * g[i];
      v[i] = 0.999 * v[i] + 0.001 * g[i] * g[i];
      const double mh = m[i] / (1 - std::pow(0.9, t));
      const double vh = v[i] / (1 - std::pow(0.999, t));
      q[i] -= 0.003 * mh / (std::sqrt(vh) + 1e-8);
    }
  }
  for (std::size_t i = 0; i < 4; ++i) CHECK(p[i] == doctest::Approx(q[i]).epsilon(1e-12));
}

TEST_CASE("early stopping arithmetic") {
  EarlyStopping s(32);
  CHECK(s.observe(1, 1.0));
  for (int e = 2; e <= 32; ++e) {
    CHECK_FALSE(s.observe(e, 1.0));
    CHECK_FALSE(s.should_stop(e));
  }
  CHECK_FALSE(s.observe(33, 1.0));
  CHECK(s.should_stop(33));
  CHECK(s.best_epoch() == 1);

  EarlyStopping t(3);
  t.observe(1, 5.0);
  t.observe(2, 4.0);
  t.observe(3, 4.5);
  CHECK(t.best_epoch() == 2);
  CHECK(t.best_loss() == 4.0);
}

TEST_CASE("training halts at best epoch + patience and returns the best snapshot") {
  const auto& d = small_data();
  TrainConfig tc;
  tc.seed = 4;
  tc.patience = 5;
  tc.max_epochs = 40;
  std::vector<model::AttentiveAggregationModel> snapshots;
  TrainHooks hooks;
  // Improves until epoch 7, then rises.
  hooks.val_loss_override = [](int epoch, double) { return epoch <= 7 ? 1.0 / epoch : 1.0 + epoch; };
  hooks.on_epoch_end = [&](int, const model::AttentiveAggregationModel& m) { snapshots.push_back(m); };
  const auto r = train_aam(d.train, d.validation, small_hyper(true), tc, hooks);
  CHECK(r.best_epoch == 7);
  CHECK(r.history.size() == 12);
  REQUIRE(snapshots.size() == 12);
  CHECK(r.model == snapshots[6]);
  CHECK_FALSE(r.model == snapshots.back());
  CHECK(r.best_val_loss == doctest::Approx(1.0 / 7));
}

TEST_CASE("constant validation loss stops at epoch patience + 1; improving runs to the cap") {
  const auto& d = small_data();
  TrainConfig tc;
  tc.seed = 1;
  tc.patience = 4;
  tc.max_epochs = 12;
  TrainHooks constant;
  constant.val_loss_override = [](int, double) { return 0.5; };
  CHECK(train_aam(d.train, d.validation, small_hyper(false), tc, constant).history.size() == 5);
  TrainHooks improving;
  improving.val_loss_override = [](int e, double) { return 1.0 / e; };
  const auto r = train_aam(d.train, d.validation, small_hyper(false), tc, improving);
  CHECK(r.history.size() == 12);
  CHECK(r.best_epoch == 12);
}

TEST_CASE("training is deterministic and records finite history") {
  const auto& d = small_data();
  TrainConfig tc;
  tc.seed = 9;
  tc.max_epochs = 6;
  const auto a = train_aam(d.train, d.validation, small_hyper(true), tc);
  const auto b = train_aam(d.train, d.validation, small_hyper(true), tc);
  CHECK(a.history == b.history);
  CHECK(a.model == b.model);
  for (const auto& r : a.history) {
    CHECK(std::isfinite(r.train_loss));
    CHECK(std::isfinite(r.val_loss));
  }
  std::ostringstream out;
  write_history_jsonl(out, a.history);
  std::istringstream lines(out.str());
  std::string line;
  std::getline(lines, line);
  CHECK(line.rfind("{\"epoch\":1,\"train_loss\":", 0) == 0);
}

TEST_CASE("training reports divergence instead of returning garbage") {
  const auto& d = small_data();
  TrainConfig tc;
  tc.seed = 2;
  tc.max_epochs = 5;
  tc.learning_rate = 1e12;
  const auto r = train_aam(d.train, d.validation, small_hyper(false), tc);
  if (r.diverged) {
    CHECK_FALSE(r.divergence.empty());
    CHECK(numeric::all_finite(r.model.parameters()));
  }
  TrainConfig bad;
  bad.batch_size = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("select_threshold") {
  const std::vector<double> sep{0.1, 0.1, 0.9, 0.9};
  const std::vector<int> y{0, 0, 1, 1};
  CHECK(select_threshold(sep, y) == 0.5);
  CHECK(select_threshold(std::vector<double>{0.3, 0.3, 0.3}, std::vector<int>{0, 1, 1}) == 0.5);
  // Best F1 needs a threshold of 0.7 here: only scores >= 0.7 are positives.
  CHECK(select_threshold(std::vector<double>{0.6, 0.65, 0.7, 0.8}, std::vector<int>{0, 0, 1, 1}) == 0.7);
}

TEST_CASE("aam search space sampling") {
  const auto a = sample_aam_candidates(50, 5, true);
  CHECK(a.size() == 50);
  std::set<int> ns, ls, bs;
  for (const auto& c : a) {
    CHECK_NOTHROW(c.hyper.validate());
    CHECK(c.hyper.use_demographics);
    ns.insert(c.hyper.hidden_units);
    ls.insert(c.hyper.layers);
    bs.insert(c.batch_size);
  }
  CHECK(ns == std::set<int>{16, 32, 64, 128});
  CHECK(ls == std::set<int>{1, 2, 3});
  CHECK(bs == std::set<int>{16, 32, 64});
  const auto b = sample_aam_candidates(50, 5, true);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].hyper == b[i].hyper);
    CHECK(a[i].batch_size == b[i].batch_size);
  }
  CHECK_THROWS_AS(sample_aam_candidates(0, 5, true), std::invalid_argument);

  Rng rng(3);
  for (int i = 0; i < 200; ++i) CHECK_NOTHROW(sample_rf_config(rng).validate());
}

TEST_CASE("random search with budget 1 returns its only trial") {
  const auto& d = small_data();
  SearchOptions so;
  so.budget = 1;
  so.seed = 2;
  so.max_epochs = 3;
  const auto r = random_search_aam(d.train, d.validation, true, so);
  REQUIRE(r.trials.size() == 1);
  CHECK(r.best.index == 0);
  CHECK(r.best.candidate.hyper == sample_aam_candidates(1, 2, true)[0].hyper);
}

TEST_CASE("search outcome does not depend on thread count") {
  const auto& d = small_data();
  SearchOptions so;
  so.budget = 3;
  so.seed = 8;
  so.max_epochs = 2;
  const auto one = random_search_aam(d.train, d.validation, false, so);
  so.threads = 3;
  const auto three = random_search_aam(d.train, d.validation, false, so);
  CHECK(one.best.index == three.best.index);
  CHECK(one.best_result.model == three.best_result.model);
  for (std::size_t i = 0; i < 3; ++i) CHECK(one.trials[i].val_auc == three.trials[i].val_auc);
}

TEST_CASE("checkpoint round trip and error handling") {
  const auto& d = small_data();
  Checkpoint c;
  c.kind = ModelKind::aam_demo;
  c.aam = model::AttentiveAggregationModel::init(small_hyper(true), 5);
  c.normalizer = d.normalizer;
  c.metric_vocabulary = current_metric_vocabulary();
  c.training_seed = 77;
  c.threshold = 0.49;
  c.training_ids = {"a", "b"};
  c.mean_agg_demo.head.coefficients = {0.1, 0.2, 0.3};
  c.forest.trees.push_back({{{baselines::SplitFeature::age, 40.5, 1, 2, 0.5}, {}, {}}});

  const auto bytes = serialize_checkpoint(c);
  CHECK(bytes.substr(0, 8) == "AAMCKPT1");
  CHECK(deserialize_checkpoint(bytes) == c);

  const auto path = (std::filesystem::temp_directory_path() / "aam_unit_ckpt.bin").string();
  save_checkpoint(c, path);
  CHECK(load_checkpoint(path) == c);
  std::filesystem::remove(path);

  auto bumped = bytes;
  bumped[8] = 2;
  CHECK_THROWS_AS(deserialize_checkpoint(bumped), CheckpointError);
  auto magic = bytes;
  magic[0] = 'X';
  CHECK_THROWS_AS(deserialize_checkpoint(magic), CheckpointError);
  for (std::size_t cut : {std::size_t{0}, std::size_t{5}, std::size_t{11}, bytes.size() / 2, bytes.size() - 1}) {
    CHECK_THROWS_AS(deserialize_checkpoint(bytes.substr(0, cut)), CheckpointError);
  }
  CHECK_THROWS_AS(deserialize_checkpoint(bytes_with_section_patch(bytes, "PARM", 8)), CheckpointError);
  CHECK_THROWS_AS(load_checkpoint("/nonexistent/aam.ckpt"), std::exception);

  auto wrong_vocab = c;
  wrong_vocab.metric_vocabulary.back() = "grip";
  CHECK_THROWS_AS(deserialize_checkpoint(serialize_checkpoint(wrong_vocab)), CheckpointError);
}

TEST_CASE("model kind names") {
  for (auto k : {ModelKind::aam, ModelKind::aam_demo, ModelKind::mean_agg, ModelKind::mean_agg_demo,
                 ModelKind::rf_demo}) {
    CHECK(parse_model_kind(to_string(k)) == k);
  }
  CHECK_FALSE(parse_model_kind("svm").has_value());
}

TEST_CASE("fitted checkpoints score identically after a save/load round trip") {
  const auto& d = small_data();
  SearchOptions so;
  so.budget = 2;
  so.seed = 5;
  so.max_epochs = 4;
  for (auto kind : {ModelKind::aam_demo, ModelKind::mean_agg, ModelKind::mean_agg_demo, ModelKind::rf_demo}) {
    CAPTURE(to_string(kind));
    const auto fit = fit_model(kind, d, so);
    const auto loaded = deserialize_checkpoint(serialize_checkpoint(fit.checkpoint));
    CHECK(score_samples(loaded, d.test) == score_samples(fit.checkpoint, d.test));
    CHECK(loaded.kind == kind);
    CHECK(loaded.threshold >= 0.0);
    CHECK(loaded.threshold <= 1.0);
    // Training ids come from the training fold only.
    std::set<std::string> train_ids;
    for (const auto& s : d.train) train_ids.insert(s.id);
    CHECK(std::set<std::string>(loaded.training_ids.begin(), loaded.training_ids.end()) == train_ids);
  }
}

TEST_CASE("prepare_data filters, splits and fits on training data only") {
  const auto& d = small_data();
  for (const auto* fold : {&d.folds.train, &d.folds.validation, &d.folds.test}) {
    for (const auto& p : fold->participants) CHECK(p.results.size() >= 20);
  }
  CHECK(d.normalizer == dataset::fit_normalizer(d.folds.train));
  for (const auto& s : d.test) CHECK(s.features.count() <= 60);
  CHECK(d.split_seed == derive_seed(3, "split"));
}

TEST_CASE("empty sequences score 0.5") {
  const auto& d = small_data();
  Checkpoint c;
  c.kind = ModelKind::aam;
  c.aam = model::AttentiveAggregationModel::init(small_hyper(false), 5);
  auto samples = std::vector<dataset::Sample>{d.test.front()};
  samples[0].features = dataset::FeatureSequence{numeric::Matrix(0, dataset::kFeatureDim)};
  CHECK(score_samples(c, samples) == std::vector<double>{0.5});
  c.kind = ModelKind::mean_agg;
  CHECK(score_samples(c, samples) == std::vector<double>{0.5});
}
