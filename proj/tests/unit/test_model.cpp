#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "aam/model/attentive_aggregation.hpp"
#include "aam/numeric/kernels.hpp"
#include "aam/numeric/ops.hpp"
#include "reference_model.hpp"
#include "test_support.hpp"

using namespace aam;
using namespace aam::model;
using dataset::kFeatureDim;

namespace {

Hyperparams hp(int n, int l, bool demo, double p = 0.0, double s = 0.0) {
  Hyperparams h;
  h.hidden_units = n;
  h.layers = l;
  h.use_demographics = demo;
  h.dropout = p;
  h.l2 = s;
  return h;
}

AttentiveAggregationModel zero_model(const Hyperparams& h) {
  return {h, std::vector<double>(ParamLayout::for_hyperparams(h).total, 0.0)};
}

}  // namespace

TEST_CASE("hyperparameter validation") {
  CHECK_NOTHROW(hp(16, 1, true).validate());
  CHECK_THROWS_AS(hp(24, 1, true).validate(), std::invalid_argument);
  CHECK_THROWS_AS(hp(16, 4, true).validate(), std::invalid_argument);
  CHECK_THROWS_AS(hp(16, 1, true, 0.4).validate(), std::invalid_argument);
  CHECK_THROWS_AS(hp(16, 1, true, 0.0, 1e-3).validate(), std::invalid_argument);
}

TEST_CASE("init is deterministic and shaped by the hyperparameters") {
  const auto h = hp(16, 1, false);
  const auto a = AttentiveAggregationModel::init(h, 5);
  const auto b = AttentiveAggregationModel::init(h, 5);
  CHECK(a == b);
  CHECK_FALSE(a == AttentiveAggregationModel::init(h, 6));
  REQUIRE(a.layout().encoder.size() == 1);
  CHECK(a.layout().encoder[0].in == kFeatureDim);
  CHECK(a.layout().encoder[0].out == 16);
  // encoder 18x16+16, attention 16x16+16+16, head 16x16+16, output 16+1
  CHECK(a.parameters().size() == 18 * 16 + 16 + 16 * 16 + 32 + 16 * 16 + 16 + 17);
  CHECK(ParamLayout::for_hyperparams(hp(16, 1, true)).head_hidden.in == 18);
  const auto q = a.query();
  CHECK(std::any_of(q.begin(), q.end(), [](double v) { return v != 0.0; }));

  std::mt19937_64 rng(1);
  const auto s = test::random_sample(rng, 12, 1);
  for (int n : {16, 32, 64, 128}) {
    for (int l : {1, 2, 3}) {
      const auto m = AttentiveAggregationModel::init(hp(n, l, true), 9);
      const double y = m.predict(s.features, s.demographics).score;
      CHECK(std::isfinite(y));
      CHECK(y > 0.0);
      CHECK(y < 1.0);
    }
  }
}

TEST_CASE("zero parameters give relu(0) hidden states and a 0.5 score") {
  const auto m = zero_model(hp(32, 2, true));
  std::mt19937_64 rng(2);
  const auto s = test::random_sample(rng, 7, 1);
  for (double v : m.encode(s.features.row(0))) CHECK(v == 0.0);
  const auto pred = m.predict(s.features, s.demographics);
  CHECK(pred.score == 0.5);
  for (double a : pred.attention) CHECK(a == doctest::Approx(1.0 / 7.0).epsilon(1e-15));

  std::vector<double> g(m.parameters().size());
  std::vector<const dataset::Sample*> batch{&s};
  CHECK(m.loss_and_gradient(batch, g) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
}

TEST_CASE("encode rejects the wrong width and ignores dropout at inference") {
  const auto base = AttentiveAggregationModel::init(hp(16, 2, false), 3);
  CHECK_THROWS_AS(base.encode(std::vector<double>(17, 0.0)), std::invalid_argument);
  std::vector<double> params(base.parameters().begin(), base.parameters().end());
  const AttentiveAggregationModel dropped(hp(16, 2, false, 0.3), params);
  std::vector<double> x(kFeatureDim, 0.0);
  x[0] = 1.0;
  CHECK(base.encode(x) == dropped.encode(x));
}

TEST_CASE("forward pass matches the plain-loop reference") {
  const auto h = hp(16, 2, true);
  const auto m = AttentiveAggregationModel::init(h, 3);
  std::vector<double> p(m.parameters().begin(), m.parameters().end());

  dataset::FeatureSequence e0{numeric::Matrix(1, kFeatureDim)};
  e0.values(0, 0) = 1.0;
  const dataset::Demographics demo{0.41, 1.0};
  const auto ref = test::reference_forward<double>(h, m.layout(), p, e0, demo);
  CHECK(m.predict(e0, demo).score == doctest::Approx(numeric::sigmoid(ref.logit)).epsilon(1e-12));

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = test::random_sample(rng, 1 + rng() % 20, 0);
    const auto pred = m.predict(s.features, s.demographics);
    const auto r = test::reference_forward<double>(h, m.layout(), p, s.features, s.demographics);
    CHECK(pred.score == doctest::Approx(numeric::sigmoid(r.logit)).epsilon(1e-12));
    for (std::size_t i = 0; i < pred.attention.size(); ++i) {
      CHECK(std::abs(pred.attention[i] - r.attention[i]) < 1e-12);
    }
  }
}

TEST_CASE("attend examples") {
  const auto m = AttentiveAggregationModel::init(hp(16, 1, false), 11);
  std::mt19937_64 rng(11);
  numeric::Matrix one(1, 16, test::random_vector(rng, 16, 0, 1));
  const auto r1 = m.attend(one);
  CHECK(r1.attention == std::vector<double>{1.0});
  for (std::size_t c = 0; c < 16; ++c) CHECK(r1.pooled[c] == doctest::Approx(one(0, c)).epsilon(1e-15));

  numeric::Matrix same(5, 16);
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t c = 0; c < 16; ++c) same(i, c) = one(0, c);
  }
  for (double a : m.attend(same).attention) CHECK(std::abs(a - 0.2) < 1e-9);

  // Score-then-softmax recomputation for k=3.
  numeric::Matrix three(3, 16, test::random_vector(rng, 48, 0, 1));
  const auto w = m.attention_weight();
  const auto b = m.attention_bias();
  const auto q = m.query();
  std::vector<double> scores(3);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t r = 0; r < 16; ++r) {
      double v = b[r];
      for (std::size_t c = 0; c < 16; ++c) v += w(r, c) * three(i, c);
      scores[i] += std::tanh(v) * q[r];
    }
  }
  const double z = std::exp(scores[0]) + std::exp(scores[1]) + std::exp(scores[2]);
  const auto r3 = m.attend(three);
  for (std::size_t i = 0; i < 3; ++i) CHECK(r3.attention[i] == doctest::Approx(std::exp(scores[i]) / z).epsilon(1e-12));

  CHECK_THROWS_AS(m.attend(numeric::Matrix(0, 16)), std::invalid_argument);
  CHECK_THROWS_AS(m.attend(numeric::Matrix(2, 8)), std::invalid_argument);
}

TEST_CASE("predict validates demographics and is deterministic") {
  std::mt19937_64 rng(4);
  const auto s = test::random_sample(rng, 9, 1);
  const auto with = AttentiveAggregationModel::init(hp(16, 1, true), 1);
  const auto without = AttentiveAggregationModel::init(hp(16, 1, false), 1);
  CHECK_THROWS_AS(with.predict(s.features, std::nullopt), std::invalid_argument);
  CHECK_THROWS_AS(without.predict(s.features, s.demographics), std::invalid_argument);
  CHECK_THROWS_AS(with.predict(dataset::FeatureSequence{numeric::Matrix(0, kFeatureDim)}, s.demographics),
                  std::invalid_argument);
  const auto a = with.predict(s.features, s.demographics);
  const auto b = with.predict(s.features, s.demographics);
  CHECK(a.score == b.score);
  CHECK(a.attention == b.attention);
}

TEST_CASE("predict is invariant under permutations of the sequence") {
  std::mt19937_64 rng(5);
  const auto m = AttentiveAggregationModel::init(hp(32, 2, true), 2);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t k = 2 + rng() % 15;
    const auto s = test::random_sample(rng, k, 0);
    std::vector<std::size_t> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    dataset::FeatureSequence shuffled{numeric::Matrix(k, kFeatureDim)};
    for (std::size_t i = 0; i < k; ++i) {
      std::copy(s.features.row(perm[i]).begin(), s.features.row(perm[i]).end(), shuffled.values.row(i).begin());
    }
    const auto a = m.predict(s.features, s.demographics);
    const auto b = m.predict(shuffled, s.demographics);
    CHECK(std::abs(a.score - b.score) < 1e-12);
    for (std::size_t i = 0; i < k; ++i) CHECK(std::abs(a.attention[perm[i]] - b.attention[i]) < 1e-12);
  }
}

TEST_CASE("loss is a batch mean and duplicated entries leave gradients unchanged") {
  std::mt19937_64 rng(6);
  const auto h = hp(16, 1, true, 0.0, 1e-4);
  const auto m = AttentiveAggregationModel::init(h, 8);
  const auto s = test::random_sample(rng, 6, 1);
  std::vector<double> g1(m.parameters().size()), g2(g1.size());
  std::vector<const dataset::Sample*> single{&s}, doubled{&s, &s};
  const double l1 = m.loss_and_gradient(single, g1);
  const double l2 = m.loss_and_gradient(doubled, g2);
  CHECK(l1 == doctest::Approx(l2).epsilon(1e-14));
  CHECK(test::max_rel_error(g1, g2, 1e-12) < 1e-12);
  CHECK(m.mean_bce(single) == doctest::Approx(l1 - m.penalty()).epsilon(1e-14));
  CHECK_THROWS_AS(m.loss_and_gradient(std::vector<const dataset::Sample*>{}, g1), std::invalid_argument);
}

TEST_CASE("non-finite losses are rejected") {
  const auto h = hp(16, 1, false);
  auto m = AttentiveAggregationModel::init(h, 1);
  m.parameters()[m.layout().head_output.bias] = std::numeric_limits<double>::quiet_NaN();
  std::mt19937_64 rng(7);
  const auto s = test::random_sample(rng, 3, 1);
  std::vector<double> g(m.parameters().size());
  CHECK_THROWS_AS(m.loss_and_gradient(std::vector<const dataset::Sample*>{&s}, g), std::domain_error);
}

TEST_CASE("analytic gradients agree with long-double finite differences") {
  std::mt19937_64 rng(5);
  for (auto h : {hp(16, 1, true, 0.0, 1e-4), hp(16, 2, false, 0.0, 1e-5), hp(32, 3, true)}) {
    CAPTURE(h.describe());
    std::vector<dataset::Sample> samples;
    for (int i = 0; i < 3; ++i) samples.push_back(test::random_sample(rng, 2 + rng() % 6, i % 2));
    std::vector<const dataset::Sample*> batch;
    for (const auto& s : samples) batch.push_back(&s);

    auto m = AttentiveAggregationModel::init(h, rng());
    for (double& v : m.parameters()) v += 0.05 * std::uniform_real_distribution<double>(-1, 1)(rng);
    std::vector<long double> p(m.parameters().begin(), m.parameters().end());
    long double margin = 0;
    test::reference_loss<long double>(h, m.layout(), p, batch, &margin);
    if (margin < 1e-5L) continue;  // too close to a relu kink for a clean difference quotient

    std::vector<double> g(p.size());
    const double loss = m.loss_and_gradient(batch, g);
    CHECK(loss == doctest::Approx(static_cast<double>(test::reference_loss<long double>(h, m.layout(), p, batch)))
                      .epsilon(1e-12));
    const auto fd = numeric::fd_gradient(
        [&](const std::vector<long double>& x) { return test::reference_loss<long double>(h, m.layout(), x, batch); },
        p, 1e-7L);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double f = static_cast<double>(fd[i]);
      CHECK(std::abs(g[i] - f) / std::max({std::abs(g[i]), std::abs(f), 1e-8}) < 1e-4);
    }
  }
}

TEST_CASE("dropout masks are seeded and only active in training") {
  const auto h = hp(16, 2, false, 0.3);
  const auto m = AttentiveAggregationModel::init(h, 4);
  std::mt19937_64 rng(8);
  const auto s = test::random_sample(rng, 10, 1);
  std::vector<const dataset::Sample*> batch{&s};
  std::vector<double> g1(m.parameters().size()), g2(g1.size()), g3(g1.size()), g0(g1.size());
  Rng r1(1), r2(1), r3(2);
  m.loss_and_gradient(batch, g1, {&r1});
  m.loss_and_gradient(batch, g2, {&r2});
  m.loss_and_gradient(batch, g3, {&r3});
  m.loss_and_gradient(batch, g0);
  CHECK(g1 == g2);
  CHECK_FALSE(g1 == g3);
  CHECK_FALSE(g1 == g0);
}

TEST_CASE("scalar and SIMD backends give the same predictions") {
  const auto m = AttentiveAggregationModel::init(hp(64, 2, true), 12);
  std::mt19937_64 rng(9);
  const auto s = test::random_sample(rng, 40, 1);
  double scalar_score = 0;
  std::vector<double> scalar_grad(m.parameters().size());
  std::vector<const dataset::Sample*> batch{&s};
  {
    numeric::kernels::ScopedBackend scoped(numeric::kernels::Backend::scalar);
    scalar_score = m.predict(s.features, s.demographics).score;
    m.loss_and_gradient(batch, scalar_grad);
  }
  for (auto b : numeric::kernels::available_backends()) {
    numeric::kernels::ScopedBackend scoped(b);
    CHECK(m.predict(s.features, s.demographics).score == doctest::Approx(scalar_score).epsilon(1e-12));
    std::vector<double> g(scalar_grad.size());
    m.loss_and_gradient(batch, g);
    CHECK(test::max_rel_error(g, scalar_grad, 1e-10) < 1e-9);
  }
}
