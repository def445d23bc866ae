#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace aam::baselines {

struct RFConfig {
  int max_depth = 3;   // D in {3, 4, 5}
  int n_trees = 32;    // T in {32, 64, 128, 256}
  std::uint64_t seed = 0;

  // Throws std::invalid_argument outside the supported choices.
  void validate() const;
};

struct RFSample {
  double age = 0.0;  // years
  int sex = 0;
  int label = 0;
};

enum class SplitFeature : int { leaf = -1, age = 0, sex = 1 };

// Binary tree node; an internal node sends x <= threshold to `left`.
struct TreeNode {
  SplitFeature feature = SplitFeature::leaf;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;  // positive-class fraction of the training rows reaching the node

  bool operator==(const TreeNode&) const = default;
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  double predict(double age, int sex) const;
  int depth() const;  // number of splits on the longest root-to-leaf path
  bool operator==(const DecisionTree&) const = default;
};

struct RandomForest {
  std::vector<DecisionTree> trees;

  double predict(double age, int sex) const;
  bool operator==(const RandomForest&) const = default;
};

// Greedy Gini tree on data[indices] (indices may repeat). Candidate splits are
// age midpoints between consecutive distinct ages in the node, then sex. A node
// becomes a leaf when pure, at max_depth, or when no split lowers impurity.
DecisionTree fit_tree(std::span<const RFSample> data, std::span<const std::size_t> indices, int max_depth);

// n draws with replacement from [0, n).
std::vector<std::size_t> bootstrap_indices(std::size_t n, std::uint64_t seed);

// T trees, each grown on its own bootstrap resample (seed derived per tree).
RandomForest fit_random_forest(std::span<const RFSample> train, const RFConfig& cfg);

inline double rf_predict(const RandomForest& m, double age, int sex) { return m.predict(age, sex); }

double gini(double positives, double total);

}  // namespace aam::baselines
