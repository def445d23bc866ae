#include <iostream>

#include <CLI11.hpp>

#include "aam/cli/commands.hpp"
#include "aam/cli/manifest.hpp"
#include "aam/common/parallel.hpp"

using namespace aam::cli;

int main(int argc, char** argv) {
  CLI::App app{"Attentive aggregation models for smartphone test histories"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  GenerateArgs gen;
  std::uint64_t gen_seed = 0;
  auto* g = app.add_subcommand("generate", "Write a synthetic cohort CSV");
  g->add_option("--config", gen.config, "key=value synthetic cohort config");
  auto* g_seed = g->add_option("--seed", gen_seed, "Master seed (overrides the config)");
  g->add_option("--out", gen.out, "Output directory")->required();

  TrainArgs train;
  train.threads = aam::default_thread_count();
  auto* t = app.add_subcommand("train", "Search, train and checkpoint a model");
  t->add_option("--data", train.data, "Cohort CSV")->required();
  t->add_option("--model", train.model, "aam | aam_demo | mean_agg | mean_agg_demo | rf_demo")
      ->capture_default_str();
  t->add_option("--budget", train.budget, "Random search trials")->capture_default_str();
  t->add_option("--k-max", train.k_max, "Maximum test results per participant")->capture_default_str();
  t->add_option("--seed", train.seed, "Master seed")->capture_default_str();
  t->add_option("--threads", train.threads, "Worker threads")->capture_default_str();
  t->add_option("--out", train.out, "Output directory")->required();

  EvaluateArgs eval;
  eval.threads = aam::default_thread_count();
  auto* e = app.add_subcommand("evaluate", "Metrics with bootstrap CIs on a fold");
  e->add_option("--checkpoint", eval.checkpoint, "Checkpoint file")->required();
  e->add_option("--data", eval.data, "Cohort CSV")->required();
  e->add_option("--fold", eval.fold, "train | validation | test")->capture_default_str();
  e->add_option("--seed", eval.seed, "Bootstrap seed")->capture_default_str();
  e->add_option("--n-boot", eval.n_boot, "Bootstrap resamples")->capture_default_str();
  e->add_option("--threads", eval.threads, "Worker threads")->capture_default_str();
  e->add_option("--out", eval.out, "Output directory")->required();

  ExperimentArgs sweep;
  sweep.threads = aam::default_thread_count();
  ExperimentArgs ablate = sweep;
  auto add_experiment = [](CLI::App* sub, ExperimentArgs& a) {
    sub->add_option("--data", a.data, "Cohort CSV")->required();
    sub->add_option("--checkpoint", a.checkpoint, "Reuse this AAM's hyperparameters and split");
    sub->add_option("--model", a.model, "aam | aam_demo (when searching)")->capture_default_str();
    sub->add_option("--budget", a.budget, "Random search trials (without --checkpoint)")->capture_default_str();
    sub->add_option("--seed", a.seed, "Master seed")->capture_default_str();
    sub->add_option("--n-boot", a.n_boot, "Bootstrap resamples")->capture_default_str();
    sub->add_option("--threads", a.threads, "Worker threads")->capture_default_str();
    sub->add_option("--out", a.out, "Output directory")->required();
  };
  auto* s = app.add_subcommand("sweep", "AUPR against the maximum number of test results");
  add_experiment(s, sweep);
  s->add_option("--k", sweep.k_list, "k values (default 25 30 40 50 100 150 200 250 300 350)");
  auto* a = app.add_subcommand("ablate", "Leave-one-test-type-out retraining");
  add_experiment(a, ablate);
  a->add_option("--k-max", ablate.k_max, "Maximum test results per participant")->capture_default_str();

  AttentionArgs att;
  auto* at = app.add_subcommand("attention", "Export one participant's attention timeline");
  at->add_option("--checkpoint", att.checkpoint, "AAM checkpoint")->required();
  at->add_option("--data", att.data, "Cohort CSV")->required();
  at->add_option("--participant", att.participant, "Participant id")->required();
  at->add_option("--out", att.out, "Output directory")->required();

  DescribeArgs desc;
  auto* d = app.add_subcommand("describe", "Per-fold cohort statistics");
  d->add_option("--data", desc.data, "Cohort CSV")->required();
  d->add_option("--seed", desc.seed, "Master seed (split)")->capture_default_str();
  d->add_option("--min-tests", desc.min_tests, "Inclusion threshold")->capture_default_str();
  d->add_option("--out", desc.out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& ex) {
    return app.exit(ex);
  } catch (const CLI::CallForAllHelp& ex) {
    return app.exit(ex);
  } catch (const CLI::CallForVersion& ex) {
    return app.exit(ex);
  } catch (const CLI::ParseError& ex) {
    app.exit(ex);
    return kUsageError;
  }

  if (g->parsed()) {
    if (g_seed->count() > 0) gen.seed = gen_seed;
    return cmd_generate(gen, std::cerr);
  }
  if (t->parsed()) return cmd_train(train, std::cerr);
  if (e->parsed()) return cmd_evaluate(eval, std::cerr);
  if (s->parsed()) return cmd_sweep(sweep, std::cerr);
  if (a->parsed()) return cmd_ablate(ablate, std::cerr);
  if (at->parsed()) return cmd_attention(att, std::cerr);
  if (d->parsed()) return cmd_describe(desc, std::cerr);
  return kUsageError;
}
