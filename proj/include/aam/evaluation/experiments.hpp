#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "aam/evaluation/bootstrap.hpp"
#include "aam/training/pipeline.hpp"

namespace aam::evaluation {

inline const std::vector<std::size_t> kDefaultKList = {25, 30, 40, 50, 100, 150, 200, 250, 300, 350};

inline constexpr std::string_view kTableCsvHeader = "model,k_max,metric,point,ci_lo,ci_hi";

struct TableRow {
  std::string model;
  std::size_t k_max = 0;
  std::string metric;
  double point = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> samples;  // bootstrap distribution, for significance tests
};

void write_table_csv(std::ostream& out, const std::vector<TableRow>& rows);

struct Comparison {
  std::string name;
  std::size_t k_max = 0;
  double p_value = 1.0;
  double p_adjusted = 1.0;  // Bonferroni over the whole family
};

void write_comparisons_csv(std::ostream& out, const std::vector<Comparison>& comparisons);

struct ExperimentOptions {
  std::size_t threads = 1;
  BootstrapOptions bootstrap;
};

struct SweepResult {
  std::vector<TableRow> rows;  // per k: "aam" then "mean_agg", metric "aupr"
  std::vector<Comparison> comparisons;
};

// For each k: retrain the AAM with fixed hyperparameters on sequences truncated
// to k, fit Mean Aggregation's orientation, and report test AUPR with CIs.
// Comparisons: AAM at each k vs AAM at the first k, and AAM vs Mean Aggregation
// at each k, by MWW on the bootstrap distributions.
SweepResult sweep_max_tests(const dataset::Folds& folds, const model::Hyperparams& h, const training::TrainConfig& tc,
                            const std::vector<std::size_t>& k_list, const ExperimentOptions& options);

struct AblationRow {
  std::string removed;  // test type name, or "all_tests" for the reference
  TableRow f1;
  double f1_drop = 0.0;          // reference F1 minus this F1
  std::size_t emptied_test = 0;  // test participants left without records (scored 0.5)
  std::size_t emptied_total = 0;
};

struct AblationResult {
  std::vector<AblationRow> rows;  // reference first, then the 9 test types

  // Test type with the largest F1 drop.
  const AblationRow& largest_drop() const;
};

// Retrains the AAM (same hyperparameters) once per removed test type, with the
// normaliser refit on the reduced training fold, and reports test F1 at the
// validation-selected threshold.
AblationResult ablate_test_types(const dataset::Folds& folds, const model::Hyperparams& h,
                                 const training::TrainConfig& tc, std::size_t k_max,
                                 const ExperimentOptions& options);

std::vector<TableRow> ablation_table(const AblationResult& r, std::size_t k_max);

}  // namespace aam::evaluation
