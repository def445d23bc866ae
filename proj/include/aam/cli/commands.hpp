#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace aam::cli {

enum ExitCode : int { kOk = 0, kRuntimeError = 1, kUsageError = 2 };

// Bad flags, missing inputs, unknown ids: reported with exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GenerateArgs {
  std::string config;                 // optional key=value file
  std::optional<std::uint64_t> seed;  // overrides the config's seed
  std::string out;
};

struct TrainArgs {
  std::string data;
  std::string model = "aam_demo";
  int budget = 50;
  std::size_t k_max = 250;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  std::string out;
};

struct EvaluateArgs {
  std::string checkpoint;
  std::string data;
  std::string fold = "test";
  std::uint64_t seed = 0;
  int n_boot = 1000;
  std::size_t threads = 1;
  std::string out;
};

// Sweep and ablation reuse the hyperparameters of `checkpoint` when given,
// otherwise they run a random search of `budget` trials first.
struct ExperimentArgs {
  std::string data;
  std::string checkpoint;
  std::string model = "aam";
  int budget = 10;
  std::size_t k_max = 250;                 // ablation only
  std::vector<std::size_t> k_list;         // sweep only; empty = default list
  std::uint64_t seed = 0;
  int n_boot = 1000;
  std::size_t threads = 1;
  std::string out;
};

struct AttentionArgs {
  std::string checkpoint;
  std::string data;
  std::string participant;
  std::string out;
};

struct DescribeArgs {
  std::string data;
  std::uint64_t seed = 0;
  std::size_t min_tests = 20;
  std::string out;
};

// Each command writes its artifacts and run.json under `out` and returns an
// exit code; diagnostics go to `err`.
int cmd_generate(const GenerateArgs& a, std::ostream& err);
int cmd_train(const TrainArgs& a, std::ostream& err);
int cmd_evaluate(const EvaluateArgs& a, std::ostream& err);
int cmd_sweep(const ExperimentArgs& a, std::ostream& err);
int cmd_ablate(const ExperimentArgs& a, std::ostream& err);
int cmd_attention(const AttentionArgs& a, std::ostream& err);
int cmd_describe(const DescribeArgs& a, std::ostream& err);

}  // namespace aam::cli
