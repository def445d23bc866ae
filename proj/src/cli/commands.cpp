#include "aam/cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include "aam/cli/manifest.hpp"
#include "aam/common/format.hpp"
#include "aam/evaluation/attention_export.hpp"
#include "aam/evaluation/experiments.hpp"
#include "aam/evaluation/metrics.hpp"
#include "aam/evaluation/report.hpp"
#include "aam/evaluation/svg_plot.hpp"
#include "aam/synth/describe.hpp"
#include "aam/synth/generator.hpp"
#include "aam/training/pipeline.hpp"

namespace fs = std::filesystem;

namespace aam::cli {
namespace {

using Clock = std::chrono::steady_clock;

int guarded(std::string_view command, std::ostream& err, const std::function<void()>& body) {
  try {
    body();
    return kOk;
  } catch (const UsageError& e) {
    err << "aam " << command << ": " << e.what() << '\n';
    return kUsageError;
  } catch (const synth::ConfigError& e) {
    err << "aam " << command << ": " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "aam " << command << ": error: " << e.what() << '\n';
    return kRuntimeError;
  }
}

void require_file(const std::string& path, std::string_view what) {
  if (path.empty()) throw UsageError(std::string(what) + " path is required");
  if (!fs::is_regular_file(path)) throw UsageError(std::string(what) + " not found: " + path);
}

fs::path prepare_out(const std::string& out) {
  if (out.empty()) throw UsageError("--out is required");
  fs::create_directories(out);
  return fs::path(out);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream o(p, std::ios::binary | std::ios::trunc);
  if (!o) throw std::runtime_error("cannot write " + p.string());
  return o;
}

void finish(RunManifest& m, const fs::path& dir, Clock::time_point start, std::string_view extra_hash = {}) {
  m.hash_parameters(extra_hash);
  m.wall_clock_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  m.artifacts["manifest"] = (dir / "run.json").string();
  m.write((dir / "run.json").string());
}

void record_training_access(RunManifest& m) {
  m.fold_access.push_back({"train", "fit"});
  m.fold_access.push_back({"validation", "model_selection"});
  m.fold_access.push_back({"validation", "threshold"});
}

training::ModelKind parse_kind(const std::string& s) {
  auto k = training::parse_model_kind(s);
  if (!k) throw UsageError("unknown model '" + s + "' (aam, aam_demo, mean_agg, mean_agg_demo, rf_demo)");
  return *k;
}

void write_trials(std::ostream& out, const training::FitResult& r) {
  for (const auto& t : r.aam_trials) {
    const auto& h = t.candidate.hyper;
    nlohmann::json j = {{"trial", t.index},          {"hidden_units", h.hidden_units},
                        {"layers", h.layers},        {"dropout", h.dropout},
                        {"l2", h.l2},                {"batch_size", t.candidate.batch_size},
                        {"seed", t.seed},            {"epochs", t.epochs},
                        {"best_epoch", t.best_epoch}, {"val_loss", t.val_loss},
                        {"diverged", t.diverged}};
    j["val_auc"] = std::isnan(t.val_auc) ? nlohmann::json(nullptr) : nlohmann::json(t.val_auc);
    out << j.dump() << '\n';
  }
  for (const auto& t : r.rf_trials) {
    nlohmann::json j = {{"trial", t.index}, {"max_depth", t.config.max_depth}, {"n_trees", t.config.n_trees}};
    j["val_auc"] = std::isnan(t.val_auc) ? nlohmann::json(nullptr) : nlohmann::json(t.val_auc);
    out << j.dump() << '\n';
  }
}

struct ExperimentSetup {
  dataset::Folds folds;
  model::Hyperparams hyper;
  training::TrainConfig tc;
  std::uint64_t split_seed = 0;
};

ExperimentSetup experiment_setup(const ExperimentArgs& a, RunManifest& m) {
  require_file(a.data, "data file");
  if (a.budget < 1) throw UsageError("--budget must be >= 1");
  const auto raw = dataset::read_cohort_file(a.data);
  ExperimentSetup s;
  s.tc.seed = derive_seed(a.seed, "experiment-train");
  if (!a.checkpoint.empty()) {
    require_file(a.checkpoint, "checkpoint");
    const auto ckpt = training::load_checkpoint(a.checkpoint);
    if (!ckpt.aam) throw UsageError("checkpoint does not hold an attentive aggregation model");
    s.folds = training::folds_for_checkpoint(raw, ckpt);
    s.hyper = ckpt.aam->hyperparams();
    s.tc.batch_size = static_cast<int>(ckpt.batch_size);
    s.split_seed = ckpt.split_seed;
    m.parameters["hyperparameter_source"] = "checkpoint";
  } else {
    const auto kind = parse_kind(a.model);
    if (kind != training::ModelKind::aam && kind != training::ModelKind::aam_demo) {
      throw UsageError("experiments need --model aam or aam_demo");
    }
    training::PipelineConfig pc;
    pc.k_max = a.k_max;
    auto data = training::prepare_data(raw, a.seed, pc);
    training::SearchOptions so;
    so.budget = a.budget;
    so.seed = a.seed;
    so.threads = a.threads;
    const auto search = training::random_search_aam(data.train, data.validation,
                                                    kind == training::ModelKind::aam_demo, so);
    s.hyper = search.best.candidate.hyper;
    s.tc.batch_size = search.best.candidate.batch_size;
    s.folds = std::move(data.folds);
    s.split_seed = data.split_seed;
    m.parameters["hyperparameter_source"] = "search";
    record_training_access(m);
  }
  m.parameters["hidden_units"] = s.hyper.hidden_units;
  m.parameters["layers"] = s.hyper.layers;
  m.parameters["dropout"] = s.hyper.dropout;
  m.parameters["l2"] = s.hyper.l2;
  m.parameters["use_demographics"] = s.hyper.use_demographics;
  m.parameters["batch_size"] = s.tc.batch_size;
  m.parameters["split_seed"] = s.split_seed;
  return s;
}

evaluation::ExperimentOptions experiment_options(const ExperimentArgs& a) {
  evaluation::ExperimentOptions o;
  o.threads = a.threads;
  o.bootstrap.n_boot = a.n_boot;
  o.bootstrap.seed = derive_seed(a.seed, "bootstrap");
  return o;
}

}  // namespace

int cmd_generate(const GenerateArgs& a, std::ostream& err) {
  return guarded("generate", err, [&] {
    const auto start = Clock::now();
    synth::SynthConfig cfg;
    std::string config_text;
    if (!a.config.empty()) {
      require_file(a.config, "config file");
      cfg = synth::read_synth_config(a.config);
      config_text = slurp(a.config);
    }
    if (a.seed) cfg.seed = *a.seed;
    const auto dir = prepare_out(a.out);
    const auto cohort = synth::generate_cohort(cfg);
    const auto csv = dir / "cohort.csv";
    dataset::write_cohort_file(csv.string(), cohort);
    {
      auto o = open_out(dir / "synth_config.txt");
      synth::write_synth_config(o, cfg);
    }

    RunManifest m;
    m.command = "generate";
    m.master_seed = cfg.seed;
    m.parameters = {{"config", a.config}, {"n_participants", cfg.n_participants}};
    m.artifacts = {{"cohort", csv.string()}, {"config", (dir / "synth_config.txt").string()}};
    finish(m, dir, start, config_text);
  });
}

int cmd_train(const TrainArgs& a, std::ostream& err) {
  return guarded("train", err, [&] {
    const auto start = Clock::now();
    require_file(a.data, "data file");
    const auto kind = parse_kind(a.model);
    if (a.budget < 1) throw UsageError("--budget must be >= 1");
    if (a.k_max < 1) throw UsageError("--k-max must be >= 1");
    const auto dir = prepare_out(a.out);

    const auto raw = dataset::read_cohort_file(a.data);
    training::PipelineConfig pc;
    pc.k_max = a.k_max;
    const auto data = training::prepare_data(raw, a.seed, pc);
    training::SearchOptions so;
    so.budget = a.budget;
    so.seed = a.seed;
    so.threads = a.threads;
    const auto fit = training::fit_model(kind, data, so);

    const auto ckpt_path = dir / "model.ckpt";
    training::save_checkpoint(fit.checkpoint, ckpt_path.string());
    {
      auto o = open_out(dir / "history.jsonl");
      training::write_history_jsonl(o, fit.history);
    }
    {
      auto o = open_out(dir / "trials.jsonl");
      write_trials(o, fit);
    }
    {
      auto o = open_out(dir / "folds.txt");
      synth::write_summary_table(o, synth::describe_folds(data.folds));
    }

    RunManifest m;
    m.command = "train";
    m.master_seed = a.seed;
    m.parameters = {{"data", a.data},         {"model", a.model},
                    {"budget", a.budget},     {"k_max", a.k_max},
                    {"min_tests", pc.min_tests}, {"split_seed", data.split_seed},
                    {"threshold", fit.checkpoint.threshold}};
    m.artifacts = {{"checkpoint", ckpt_path.string()},
                   {"history", (dir / "history.jsonl").string()},
                   {"trials", (dir / "trials.jsonl").string()},
                   {"folds", (dir / "folds.txt").string()}};
    record_training_access(m);
    finish(m, dir, start);
  });
}

int cmd_evaluate(const EvaluateArgs& a, std::ostream& err) {
  return guarded("evaluate", err, [&] {
    const auto start = Clock::now();
    require_file(a.checkpoint, "checkpoint");
    require_file(a.data, "data file");
    if (a.fold != "test" && a.fold != "validation" && a.fold != "train") {
      throw UsageError("--fold must be train, validation or test");
    }
    if (a.n_boot < 1) throw UsageError("bootstrap count must be >= 1");
    const auto dir = prepare_out(a.out);
    const auto ckpt = training::load_checkpoint(a.checkpoint);
    const auto raw = dataset::read_cohort_file(a.data);
    const auto folds = training::folds_for_checkpoint(raw, ckpt);
    const auto& cohort = a.fold == "test" ? folds.test : a.fold == "validation" ? folds.validation : folds.train;
    const auto samples = dataset::make_samples(cohort, ckpt.normalizer, ckpt.k_max);
    const auto scores = training::score_samples(ckpt, samples);
    const auto labels = training::labels_of(samples);

    evaluation::BootstrapOptions bo;
    bo.n_boot = a.n_boot;
    bo.seed = derive_seed(a.seed, "bootstrap");
    bo.threads = a.threads;
    auto report = evaluation::evaluate_scores(scores, labels, ckpt.threshold,
                                              std::string(training::to_string(ckpt.kind)), bo);
    std::size_t overlap = 0;
    for (const auto& p : cohort.participants) {
      if (std::find(ckpt.training_ids.begin(), ckpt.training_ids.end(), p.id) != ckpt.training_ids.end()) ++overlap;
    }
    if (overlap > 0) {
      report.warnings.push_back("evaluated on training data: " + std::to_string(overlap) + " of " +
                                std::to_string(cohort.size()) + " participants were used for training");
    }
    auto j = evaluation::to_json(report);
    j["fold"] = a.fold;
    j["training_data_overlap"] = overlap;
    {
      auto o = open_out(dir / "metrics.json");
      o << j.dump(2) << '\n';
    }
    const auto curve = evaluation::roc_curve(scores, labels);
    {
      auto o = open_out(dir / "roc.csv");
      o << "threshold,fpr,tpr\n";
      for (const auto& p : curve) {
        o << format_double(p.threshold) << ',' << format_double(p.fpr) << ',' << format_double(p.tpr) << '\n';
      }
    }
    {
      evaluation::PlotSeries s{std::string(training::to_string(ckpt.kind)), {}};
      for (const auto& p : curve) s.points.emplace_back(p.fpr, p.tpr);
      auto o = open_out(dir / "roc.svg");
      o << evaluation::line_chart_svg({"ROC (" + a.fold + " fold)", "False positive rate", "True positive rate", true},
                                      {s});
    }
    {
      auto o = open_out(dir / "scores.csv");
      o << "participant_id,label,score\n";
      for (std::size_t i = 0; i < samples.size(); ++i) {
        o << samples[i].id << ',' << labels[i] << ',' << format_double(scores[i]) << '\n';
      }
    }

    RunManifest m;
    m.command = "evaluate";
    m.master_seed = a.seed;
    m.parameters = {{"checkpoint", a.checkpoint}, {"data", a.data}, {"fold", a.fold}, {"n_boot", a.n_boot}};
    m.artifacts = {{"metrics", (dir / "metrics.json").string()},
                   {"roc", (dir / "roc.csv").string()},
                   {"roc_plot", (dir / "roc.svg").string()},
                   {"scores", (dir / "scores.csv").string()}};
    m.fold_access.push_back({a.fold, "evaluate"});
    finish(m, dir, start);
  });
}

int cmd_sweep(const ExperimentArgs& a, std::ostream& err) {
  return guarded("sweep", err, [&] {
    const auto start = Clock::now();
    RunManifest m;
    m.command = "sweep";
    m.master_seed = a.seed;
    const auto dir = prepare_out(a.out);
    const auto setup = experiment_setup(a, m);
    const auto k_list = a.k_list.empty() ? evaluation::kDefaultKList : a.k_list;
    for (auto k : k_list) {
      if (k < 1) throw UsageError("k values must be >= 1");
    }
    const auto result = evaluation::sweep_max_tests(setup.folds, setup.hyper, setup.tc, k_list, experiment_options(a));
    {
      auto o = open_out(dir / "sweep.csv");
      evaluation::write_table_csv(o, result.rows);
    }
    {
      auto o = open_out(dir / "sweep_significance.csv");
      evaluation::write_comparisons_csv(o, result.comparisons);
    }
    {
      std::map<std::string, evaluation::PlotSeries> series;
      for (const auto& r : result.rows) {
        auto& s = series[r.model];
        s.name = r.model;
        s.points.emplace_back(static_cast<double>(r.k_max), r.point);
      }
      std::vector<evaluation::PlotSeries> list;
      for (auto& [_, s] : series) list.push_back(std::move(s));
      auto o = open_out(dir / "sweep.svg");
      o << evaluation::line_chart_svg({"Test AUPR by maximum test count", "k_max", "AUPR", false}, list);
    }
    m.parameters["k_list"] = k_list;
    m.parameters["data"] = a.data;
    m.parameters["checkpoint"] = a.checkpoint;
    m.parameters["budget"] = a.budget;
    m.parameters["n_boot"] = a.n_boot;
    m.artifacts = {{"table", (dir / "sweep.csv").string()},
                   {"significance", (dir / "sweep_significance.csv").string()},
                   {"plot", (dir / "sweep.svg").string()}};
    m.fold_access.push_back({"train", "fit"});
    m.fold_access.push_back({"validation", "threshold"});
    m.fold_access.push_back({"test", "evaluate"});
    finish(m, dir, start);
  });
}

int cmd_ablate(const ExperimentArgs& a, std::ostream& err) {
  return guarded("ablate", err, [&] {
    const auto start = Clock::now();
    RunManifest m;
    m.command = "ablate";
    m.master_seed = a.seed;
    const auto dir = prepare_out(a.out);
    if (a.k_max < 1) throw UsageError("--k-max must be >= 1");
    const auto setup = experiment_setup(a, m);
    const auto result =
        evaluation::ablate_test_types(setup.folds, setup.hyper, setup.tc, a.k_max, experiment_options(a));
    {
      auto o = open_out(dir / "ablation.csv");
      evaluation::write_table_csv(o, evaluation::ablation_table(result, a.k_max));
    }
    {
      nlohmann::json rows = nlohmann::json::array();
      for (const auto& r : result.rows) {
        rows.push_back({{"removed", r.removed},
                        {"f1", r.f1.point},
                        {"f1_drop", r.f1_drop},
                        {"emptied_test_participants", r.emptied_test},
                        {"emptied_participants", r.emptied_total}});
      }
      auto o = open_out(dir / "ablation_summary.json");
      o << nlohmann::json{{"rows", rows}, {"largest_drop", result.largest_drop().removed}}.dump(2) << '\n';
    }
    m.parameters["data"] = a.data;
    m.parameters["checkpoint"] = a.checkpoint;
    m.parameters["budget"] = a.budget;
    m.parameters["k_max"] = a.k_max;
    m.parameters["n_boot"] = a.n_boot;
    m.artifacts = {{"table", (dir / "ablation.csv").string()},
                   {"summary", (dir / "ablation_summary.json").string()}};
    m.fold_access.push_back({"train", "fit"});
    m.fold_access.push_back({"validation", "threshold"});
    m.fold_access.push_back({"test", "evaluate"});
    finish(m, dir, start);
  });
}

int cmd_attention(const AttentionArgs& a, std::ostream& err) {
  return guarded("attention", err, [&] {
    const auto start = Clock::now();
    require_file(a.checkpoint, "checkpoint");
    require_file(a.data, "data file");
    if (a.participant.empty()) throw UsageError("--participant is required");
    const auto ckpt = training::load_checkpoint(a.checkpoint);
    if (!ckpt.aam) throw UsageError("checkpoint does not hold an attentive aggregation model");
    const auto raw = dataset::read_cohort_file(a.data);
    const auto* p = raw.find(a.participant);
    if (!p) throw UsageError("unknown participant '" + a.participant + "'");
    if (p->results.empty()) throw UsageError("participant '" + a.participant + "' has no test results");
    const auto dir = prepare_out(a.out);
    const auto timeline = evaluation::export_attention(ckpt, *p);
    {
      auto o = open_out(dir / "attention.jsonl");
      evaluation::write_attention_jsonl(o, timeline);
    }
    {
      auto o = open_out(dir / "attention_summary.json");
      o << evaluation::attention_summary(timeline).dump(2) << '\n';
    }
    RunManifest m;
    m.command = "attention";
    m.parameters = {{"checkpoint", a.checkpoint}, {"data", a.data}, {"participant", a.participant}};
    m.artifacts = {{"timeline", (dir / "attention.jsonl").string()},
                   {"summary", (dir / "attention_summary.json").string()}};
    finish(m, dir, start);
  });
}

int cmd_describe(const DescribeArgs& a, std::ostream& err) {
  return guarded("describe", err, [&] {
    const auto start = Clock::now();
    require_file(a.data, "data file");
    const auto dir = prepare_out(a.out);
    const auto raw = dataset::read_cohort_file(a.data);
    training::PipelineConfig pc;
    pc.min_tests = a.min_tests;
    const auto filtered = dataset::filter_min_tests(raw, a.min_tests);
    const auto split_seed = derive_seed(a.seed, "split");
    const auto folds = dataset::stratified_split(filtered, pc.ratios, split_seed);
    {
      auto o = open_out(dir / "cohort_summary.txt");
      synth::write_summary_table(o, synth::describe_folds(folds));
    }
    RunManifest m;
    m.command = "describe";
    m.master_seed = a.seed;
    m.parameters = {{"data", a.data}, {"min_tests", a.min_tests}, {"split_seed", split_seed},
                    {"participants_before_filter", raw.size()}, {"participants_after_filter", filtered.size()}};
    m.artifacts = {{"summary", (dir / "cohort_summary.txt").string()}};
    finish(m, dir, start);
  });
}

}  // namespace aam::cli
