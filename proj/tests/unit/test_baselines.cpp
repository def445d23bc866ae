#include <doctest.h>

#include <numeric>

#include "aam/baselines/mean_aggregation.hpp"
#include "aam/baselines/random_forest.hpp"
#include "aam/numeric/ops.hpp"
#include "test_support.hpp"

using namespace aam;
using namespace aam::baselines;

namespace {

dataset::FeatureSequence with_scores(const std::vector<double>& s) {
  dataset::FeatureSequence fs{numeric::Matrix(s.size(), dataset::kFeatureDim)};
  for (std::size_t i = 0; i < s.size(); ++i) {
    fs.values(i, dataset::kMetricOffset) = 1.0;
    fs.values(i, dataset::kScoreIndex) = s[i];
  }
  return fs;
}

double mean_bce(const LogisticModel& m, const std::vector<std::vector<double>>& x, const std::vector<int>& y) {
  double s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double p = std::clamp(m.predict(x[i]), 1e-15, 1 - 1e-15);
    s -= y[i] ? std::log(p) : std::log(1 - p);
  }
  return s / static_cast<double>(x.size());
}

// Lowest weighted Gini over every candidate stump, evaluated by brute force.
struct Stump {
  SplitFeature feature;
  double threshold;
  double left, right, impurity;
};

Stump best_stump(const std::vector<RFSample>& d) {
  std::vector<std::pair<SplitFeature, double>> cands;
  std::vector<double> ages;
  for (const auto& s : d) ages.push_back(s.age);
  std::sort(ages.begin(), ages.end());
  ages.erase(std::unique(ages.begin(), ages.end()), ages.end());
  for (std::size_t i = 0; i + 1 < ages.size(); ++i) cands.emplace_back(SplitFeature::age, 0.5 * (ages[i] + ages[i + 1]));
  cands.emplace_back(SplitFeature::sex, 0.5);
  Stump best{SplitFeature::leaf, 0, 0, 0, 1e9};
  for (auto [f, t] : cands) {
    double ln = 0, lp = 0, rn = 0, rp = 0;
    for (const auto& s : d) {
      const double x = f == SplitFeature::age ? s.age : s.sex;
      (x <= t ? ln : rn) += 1;
      (x <= t ? lp : rp) += s.label;
    }
    if (ln == 0 || rn == 0) continue;
    const double imp = (ln * 2 * (lp / ln) * (1 - lp / ln) + rn * 2 * (rp / rn) * (1 - rp / rn)) / (ln + rn);
    if (imp < best.impurity) best = {f, t, lp / ln, rp / rn, imp};
  }
  return best;
}

}  // namespace

TEST_CASE("mean_agg_score examples") {
  CHECK(mean_agg_score(with_scores({0.5, 0.5, 0.5})) == 0.5);
  CHECK(mean_agg_score(with_scores({0.0, 1.0})) == 0.5);
  CHECK_THROWS_AS(mean_agg_score(with_scores({})), std::invalid_argument);
  CHECK(MeanAggregation{}.score(with_scores({})) == 0.5);
  CHECK(MeanAggregation{true}.score(with_scores({0.2})) == doctest::Approx(0.8));
}

TEST_CASE("mean_agg_score equals an independent summation and is order free") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    auto fs = test::random_sequence(rng, 1 + rng() % 60);
    long double sum = 0;
    for (std::size_t i = 0; i < fs.count(); ++i) sum += fs.values(i, dataset::kScoreIndex);
    const double y = mean_agg_score(fs);
    CHECK(std::abs(y - static_cast<double>(sum / fs.count())) < 1e-14);
    CHECK(y >= 0.0);
    CHECK(y <= 1.0);
    std::vector<double> rev;
    for (std::size_t i = fs.count(); i-- > 0;) rev.push_back(fs.values(i, dataset::kScoreIndex));
    CHECK(std::abs(mean_agg_score(with_scores(rev)) - y) < 1e-12);
  }
}

TEST_CASE("mean aggregation orientation follows validation AUC") {
  std::vector<dataset::Sample> val;
  for (int i = 0; i < 10; ++i) {
    val.push_back({"v", with_scores({i < 5 ? 0.8 : 0.2}), {}, i < 5 ? 1 : 0});
  }
  CHECK_FALSE(fit_mean_aggregation(val).flipped);
  for (auto& s : val) s.label = 1 - s.label;
  CHECK(fit_mean_aggregation(val).flipped);
}

TEST_CASE("logistic regression: null signal, separable data and a grid oracle") {
  std::mt19937_64 rng(3);
  std::vector<std::vector<double>> x;
  std::vector<int> y;
  // Every input pattern appears with both labels in a 3:1 ratio.
  for (int rep = 0; rep < 4; ++rep) {
    for (double a : {0.0, 0.5, 1.0}) {
      for (double b : {0.0, 1.0}) {
        x.push_back({a, b});
        y.push_back(rep < 3);
      }
    }
  }
  const auto null = fit_logistic(x, y);
  CHECK(std::abs(null.coefficients[0]) < 1e-2);
  CHECK(std::abs(null.coefficients[1]) < 1e-2);
  CHECK(null.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-2));

  std::vector<std::vector<double>> sx;
  std::vector<int> sy;
  for (int i = 0; i < 20; ++i) {
    sx.push_back({i < 10 ? -1.0 - 0.1 * i : 1.0 + 0.1 * i});
    sy.push_back(i >= 10);
  }
  const auto sep = fit_logistic(sx, sy, {1.0, 1e-12, 10000});
  CHECK(sep.final_loss < 0.01);

  // 20-point noisy toy against a coarse grid search over (w, b).
  std::vector<std::vector<double>> gx;
  std::vector<int> gy;
  std::normal_distribution<double> nd;
  for (int i = 0; i < 20; ++i) {
    const double v = nd(rng);
    gx.push_back({v});
    gy.push_back(v + 0.8 * nd(rng) > 0);
  }
  const auto fit = fit_logistic(gx, gy);
  LogisticModel best{{0.0}, 0.0, 0, 0};
  double best_loss = 1e9;
  for (double w = -6; w <= 6; w += 0.02) {
    for (double b = -3; b <= 3; b += 0.02) {
      LogisticModel m{{w}, b, 0, 0};
      const double l = mean_bce(m, gx, gy);
      if (l < best_loss) {
        best_loss = l;
        best = m;
      }
    }
  }
  CHECK(mean_bce(fit, gx, gy) <= best_loss + 1e-6);
  for (const auto& row : gx) CHECK(std::abs(fit.predict(row) - best.predict(row)) < 0.02);

  CHECK_THROWS_AS(fit_logistic(gx, std::vector<int>(20, 1)), std::invalid_argument);
  CHECK_THROWS_AS(fit_logistic({{1.0}, {1.0, 2.0}}, std::vector<int>{0, 1}), std::invalid_argument);
}

TEST_CASE("mean aggregation plus demographics uses three inputs") {
  std::mt19937_64 rng(4);
  std::vector<dataset::Sample> train;
  for (int i = 0; i < 60; ++i) train.push_back(test::random_sample(rng, 5, i % 3 == 0));
  const auto m = fit_mean_agg_demo(train);
  CHECK(m.head.coefficients.size() == 3);
  const auto in = mean_agg_demo_inputs(train[0]);
  CHECK(in == std::vector<double>{mean_agg_score(train[0].features), train[0].demographics.age,
                                  train[0].demographics.sex});
  const double p = m.score(train[0]);
  CHECK(p > 0.0);
  CHECK(p < 1.0);
}

TEST_CASE("decision trees: separable, degenerate and depth-bounded") {
  std::vector<RFSample> sexsep;
  for (int i = 0; i < 20; ++i) sexsep.push_back({30.0 + i, i % 2, i % 2});
  std::vector<std::size_t> all(sexsep.size());
  std::iota(all.begin(), all.end(), 0);
  const auto t = fit_tree(sexsep, all, 5);
  CHECK(t.depth() == 1);
  for (const auto& s : sexsep) CHECK(t.predict(s.age, s.sex) == s.label);

  std::vector<RFSample> same(8, RFSample{40, 1, 1});
  const auto c = fit_tree(same, std::vector<std::size_t>(8, 0), 3);
  CHECK(c.nodes.size() == 1);
  CHECK(c.predict(10, 0) == 1.0);

  std::mt19937_64 rng(5);
  std::vector<RFSample> noisy;
  for (int i = 0; i < 300; ++i) noisy.push_back({static_cast<double>(18 + rng() % 60), static_cast<int>(rng() % 2), static_cast<int>(rng() % 2)});
  for (int depth : {3, 4, 5}) {
    const auto f = fit_random_forest(noisy, {depth, 32, 9});
    CHECK(f.trees.size() == 32);
    for (const auto& tree : f.trees) {
      CHECK(tree.depth() <= depth);
      for (const auto& n : tree.nodes) {
        CHECK(n.value >= 0.0);
        CHECK(n.value <= 1.0);
      }
    }
    for (int k = 0; k < 100; ++k) {
      const double p = f.predict(std::uniform_real_distribution<double>(0, 120)(rng), static_cast<int>(rng() % 2));
      CHECK(p >= 0.0);
      CHECK(p <= 1.0);
    }
  }
}

TEST_CASE("a depth-1 tree equals the exhaustive best stump") {
  std::mt19937_64 rng(6);
  int compared = 0;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<RFSample> d;
    for (int i = 0; i < 25; ++i) {
      const double age = static_cast<double>(20 + rng() % 50);
      const int sex = static_cast<int>(rng() % 2);
      d.push_back({age, sex, static_cast<int>((age > 45) ^ (rng() % 4 == 0))});
    }
    const auto oracle = best_stump(d);
    std::vector<std::size_t> idx(d.size());
    std::iota(idx.begin(), idx.end(), 0);
    const auto tree = fit_tree(d, idx, 1);
    REQUIRE(tree.nodes.size() == 3);
    const auto& root = tree.nodes[0];
    CHECK(root.feature == oracle.feature);
    CHECK(root.threshold == oracle.threshold);
    CHECK(tree.nodes[root.left].value == doctest::Approx(oracle.left));
    CHECK(tree.nodes[root.right].value == doctest::Approx(oracle.right));
    ++compared;
  }
  CHECK(compared == 50);
}

TEST_CASE("forest prediction is the mean of its trees") {
  DecisionTree stump{{{SplitFeature::age, 40.0, 1, 2, 0.5}, {SplitFeature::leaf, 0, -1, -1, 0.25},
                      {SplitFeature::leaf, 0, -1, -1, 0.75}}};
  DecisionTree sex{{{SplitFeature::sex, 0.5, 1, 2, 0.5}, {SplitFeature::leaf, 0, -1, -1, 0.1},
                    {SplitFeature::leaf, 0, -1, -1, 0.9}}};
  CHECK(RandomForest{{stump, stump, stump}}.predict(30, 0) == stump.predict(30, 0));
  CHECK(RandomForest{{stump, sex}}.predict(30, 1) == doctest::Approx((0.25 + 0.9) / 2));
  CHECK(RandomForest{{stump, sex}}.predict(50, 0) == doctest::Approx((0.75 + 0.1) / 2));
  CHECK(rf_predict(RandomForest{{stump}}, 40.0, 0) == 0.25);
}

TEST_CASE("bootstrap indices and forest determinism") {
  const auto a = bootstrap_indices(100, 4);
  CHECK(a == bootstrap_indices(100, 4));
  CHECK(a.size() == 100);
  for (auto i : a) CHECK(i < 100);
  std::vector<RFSample> d;
  for (int i = 0; i < 50; ++i) d.push_back({20.0 + i, i % 2, i > 25});
  CHECK(fit_random_forest(d, {4, 64, 1}) == fit_random_forest(d, {4, 64, 1}));
  CHECK_THROWS_AS((RFConfig{6, 32, 0}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((RFConfig{3, 10, 0}).validate(), std::invalid_argument);
  CHECK(gini(5, 10) == 0.5);
  CHECK(gini(0, 10) == 0.0);
}
