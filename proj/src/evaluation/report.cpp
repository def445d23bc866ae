#include "aam/evaluation/report.hpp"

#include <stdexcept>

#include "aam/evaluation/metrics.hpp"

namespace aam::evaluation {

const MetricEstimate& MetricsReport::metric(std::string_view name) const {
  for (const auto& m : metrics) {
    if (m.name == name) return m;
  }
  throw std::out_of_range("no metric named " + std::string(name));
}

MetricsReport evaluate_scores(std::span<const double> scores, std::span<const int> labels, double threshold,
                              const std::string& model, const BootstrapOptions& options) {
  if (!has_both_classes(labels)) throw std::invalid_argument("evaluate_scores: test labels need both classes");
  const std::vector<std::pair<std::string, MetricFn>> fns = {
      {"auc", [](auto s, auto l) { return roc_auc(s, l); }},
      {"aupr", [](auto s, auto l) { return aupr(s, l); }},
      {"f1", [threshold](auto s, auto l) { return confusion_metrics(s, l, threshold).f1; }},
      {"sensitivity", [threshold](auto s, auto l) { return confusion_metrics(s, l, threshold).sensitivity; }},
      {"specificity", [threshold](auto s, auto l) { return confusion_metrics(s, l, threshold).specificity; }},
  };
  MetricsReport r;
  r.model = model;
  r.seed = options.seed;
  r.threshold = threshold;
  r.n_test = scores.size();
  std::size_t contained = 0;
  for (const auto& [name, fn] : fns) {
    auto b = bootstrap_ci(fn, scores, labels, options);
    if (b.lo <= b.point && b.point <= b.hi) ++contained;
    r.dropped_resamples = std::max(r.dropped_resamples, b.dropped);
    r.metrics.push_back({name, b.point, b.lo, b.hi, std::move(b.samples)});
  }
  r.containment_rate = static_cast<double>(contained) / static_cast<double>(fns.size());
  if (r.dropped_resamples > 0) {
    r.warnings.push_back(std::to_string(r.dropped_resamples) + " single-class bootstrap resamples dropped");
  }
  return r;
}

nlohmann::json to_json(const MetricsReport& r) {
  nlohmann::json j;
  j["model"] = r.model;
  j["seed"] = r.seed;
  j["threshold"] = r.threshold;
  j["n_test"] = r.n_test;
  auto& metrics = j["metrics"];
  metrics = nlohmann::json::object();
  for (const auto& m : r.metrics) metrics[m.name] = {{"point", m.point}, {"ci_lo", m.lo}, {"ci_hi", m.hi}};
  j["dropped_resamples"] = r.dropped_resamples;
  j["ci_containment_rate"] = r.containment_rate;
  j["warnings"] = r.warnings;
  return j;
}

}  // namespace aam::evaluation
