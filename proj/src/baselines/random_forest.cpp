#include "aam/baselines/random_forest.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <string>

#include "aam/common/seed.hpp"

namespace aam::baselines {

void RFConfig::validate() const {
  if (max_depth < 3 || max_depth > 5) throw std::invalid_argument("max_depth must be 3, 4 or 5");
  if (n_trees != 32 && n_trees != 64 && n_trees != 128 && n_trees != 256) {
    throw std::invalid_argument("n_trees must be 32, 64, 128 or 256 (got " + std::to_string(n_trees) + ")");
  }
}

double gini(double positives, double total) {
  if (total <= 0.0) return 0.0;
  const double p = positives / total;
  return 2.0 * p * (1.0 - p);
}

double DecisionTree::predict(double age, int sex) const {
  if (nodes.empty()) throw std::logic_error("DecisionTree::predict on an empty tree");
  int i = 0;
  while (nodes[i].feature != SplitFeature::leaf) {
    const TreeNode& n = nodes[i];
    const double x = n.feature == SplitFeature::age ? age : static_cast<double>(sex);
    i = x <= n.threshold ? n.left : n.right;
  }
  return nodes[i].value;
}

int DecisionTree::depth() const {
  std::function<int(int)> rec = [&](int i) -> int {
    if (nodes[i].feature == SplitFeature::leaf) return 0;
    return 1 + std::max(rec(nodes[i].left), rec(nodes[i].right));
  };
  return nodes.empty() ? 0 : rec(0);
}

double RandomForest::predict(double age, int sex) const {
  if (trees.empty()) throw std::logic_error("RandomForest::predict on an empty forest");
  double s = 0.0;
  for (const auto& t : trees) s += t.predict(age, sex);
  return s / static_cast<double>(trees.size());
}

namespace {

struct Split {
  SplitFeature feature = SplitFeature::leaf;
  double threshold = 0.0;
  double impurity = 0.0;  // weighted child impurity
};

Split best_split(std::span<const RFSample> data, const std::vector<std::size_t>& rows) {
  const double total = static_cast<double>(rows.size());
  double pos = 0.0;
  for (auto r : rows) pos += data[r].label;
  Split best;
  best.impurity = gini(pos, total);
  constexpr double kMinGain = 1e-12;

  // age: sweep sorted rows, evaluating a cut between each pair of distinct ages
  std::vector<std::size_t> sorted = rows;
  std::stable_sort(sorted.begin(), sorted.end(), [&](auto a, auto b) { return data[a].age < data[b].age; });
  double left_n = 0.0;
  double left_pos = 0.0;
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
    left_n += 1.0;
    left_pos += data[sorted[i]].label;
    const double a = data[sorted[i]].age;
    const double b = data[sorted[i + 1]].age;
    if (a == b) continue;
    const double right_n = total - left_n;
    const double imp = (left_n * gini(left_pos, left_n) + right_n * gini(pos - left_pos, right_n)) / total;
    if (imp < best.impurity - kMinGain) best = {SplitFeature::age, 0.5 * (a + b), imp};
  }

  double female_n = 0.0;
  double female_pos = 0.0;
  for (auto r : rows) {
    if (data[r].sex == 1) {
      female_n += 1.0;
      female_pos += data[r].label;
    }
  }
  const double male_n = total - female_n;
  if (female_n > 0.0 && male_n > 0.0) {
    const double imp = (male_n * gini(pos - female_pos, male_n) + female_n * gini(female_pos, female_n)) / total;
    if (imp < best.impurity - kMinGain) best = {SplitFeature::sex, 0.5, imp};
  }
  return best;
}

int grow(std::span<const RFSample> data, std::vector<std::size_t> rows, int depth_left, DecisionTree& tree) {
  const int id = static_cast<int>(tree.nodes.size());
  tree.nodes.emplace_back();
  double pos = 0.0;
  for (auto r : rows) pos += data[r].label;
  tree.nodes[id].value = rows.empty() ? 0.0 : pos / static_cast<double>(rows.size());
  const bool pure = pos == 0.0 || pos == static_cast<double>(rows.size());
  if (depth_left == 0 || pure || rows.size() < 2) return id;

  const Split s = best_split(data, rows);
  if (s.feature == SplitFeature::leaf) return id;
  std::vector<std::size_t> left;
  std::vector<std::size_t> right;
  for (auto r : rows) {
    const double x = s.feature == SplitFeature::age ? data[r].age : static_cast<double>(data[r].sex);
    (x <= s.threshold ? left : right).push_back(r);
  }
  rows.clear();
  rows.shrink_to_fit();
  tree.nodes[id].feature = s.feature;
  tree.nodes[id].threshold = s.threshold;
  const int l = grow(data, std::move(left), depth_left - 1, tree);
  const int r = grow(data, std::move(right), depth_left - 1, tree);
  tree.nodes[id].left = l;
  tree.nodes[id].right = r;
  return id;
}

}  // namespace

DecisionTree fit_tree(std::span<const RFSample> data, std::span<const std::size_t> indices, int max_depth) {
  if (indices.empty()) throw std::invalid_argument("fit_tree: no training rows");
  if (max_depth < 0) throw std::invalid_argument("fit_tree: negative depth");
  DecisionTree tree;
  grow(data, std::vector<std::size_t>(indices.begin(), indices.end()), max_depth, tree);
  return tree;
}

std::vector<std::size_t> bootstrap_indices(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<std::size_t> idx(n);
  for (auto& i : idx) i = pick(rng);
  return idx;
}

RandomForest fit_random_forest(std::span<const RFSample> train, const RFConfig& cfg) {
  if (train.empty()) throw std::invalid_argument("fit_random_forest: empty training fold");
  if (cfg.n_trees < 1 || cfg.max_depth < 0) throw std::invalid_argument("fit_random_forest: invalid config");
  RandomForest forest;
  forest.trees.reserve(static_cast<std::size_t>(cfg.n_trees));
  for (int t = 0; t < cfg.n_trees; ++t) {
    const auto idx = bootstrap_indices(train.size(), derive_seed(cfg.seed, "rf-tree", static_cast<std::uint64_t>(t)));
    forest.trees.push_back(fit_tree(train, idx, cfg.max_depth));
  }
  return forest;
}

}  // namespace aam::baselines
