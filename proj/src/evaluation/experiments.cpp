#include "aam/evaluation/experiments.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

#include "aam/common/format.hpp"
#include "aam/common/parallel.hpp"
#include "aam/evaluation/metrics.hpp"
#include "aam/evaluation/mww.hpp"

namespace aam::evaluation {
namespace {

TableRow table_row(std::string model, std::size_t k, std::string metric, const MetricFn& fn,
                   std::span<const double> scores, std::span<const int> labels, const BootstrapOptions& opts) {
  auto b = bootstrap_ci(fn, scores, labels, opts);
  return {std::move(model), k, std::move(metric), b.point, b.lo, b.hi, std::move(b.samples)};
}

BootstrapOptions single_threaded(BootstrapOptions o) {
  o.threads = 1;
  return o;
}

std::size_t count_empty(const std::vector<dataset::Sample>& samples) {
  return static_cast<std::size_t>(
      std::count_if(samples.begin(), samples.end(), [](const auto& s) { return s.features.empty(); }));
}

}  // namespace

void write_table_csv(std::ostream& out, const std::vector<TableRow>& rows) {
  out << kTableCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.model << ',' << r.k_max << ',' << r.metric << ',' << format_double(r.point) << ',' << format_double(r.lo) << ',' << format_double(r.hi) << '\n';
  }
}

void write_comparisons_csv(std::ostream& out, const std::vector<Comparison>& comparisons) {
  out << "comparison,k_max,p_value,p_adjusted\n";
  for (const auto& c : comparisons) {
    out << c.name << ',' << c.k_max << ',' << format_double(c.p_value) << ',' << format_double(c.p_adjusted) << '\n';
  }
}

SweepResult sweep_max_tests(const dataset::Folds& folds, const model::Hyperparams& h, const training::TrainConfig& tc,
                            const std::vector<std::size_t>& k_list, const ExperimentOptions& options) {
  if (k_list.empty()) throw std::invalid_argument("sweep_max_tests: empty k list");
  const auto boot = single_threaded(options.bootstrap);
  const MetricFn aupr_fn = [](auto s, auto l) { return aupr(s, l); };
  std::vector<std::pair<TableRow, TableRow>> per_k(k_list.size());

  parallel_for(k_list.size(), options.threads, [&](std::size_t i) {
    const std::size_t k = k_list[i];
    const auto data = training::prepare_folds(folds, k);
    const auto labels = training::labels_of(data.test);

    const auto fit = training::fit_aam_fixed(data, h, tc);
    const auto aam_scores = training::score_samples(fit.checkpoint, data.test);

    const auto orientation = baselines::fit_mean_aggregation(data.validation);
    std::vector<double> mean_scores;
    for (const auto& s : data.test) mean_scores.push_back(orientation.score(s.features));

    per_k[i] = {table_row("aam", k, "aupr", aupr_fn, aam_scores, labels, boot),
                table_row("mean_agg", k, "aupr", aupr_fn, mean_scores, labels, boot)};
  });

  SweepResult r;
  for (auto& [aam_row, mean_row] : per_k) {
    r.rows.push_back(aam_row);
    r.rows.push_back(mean_row);
  }
  std::vector<double> raw;
  for (std::size_t i = 1; i < per_k.size(); ++i) {
    r.comparisons.push_back({"aam_k_vs_aam_k" + std::to_string(k_list.front()), k_list[i],
                             mww_test(per_k[i].first.samples, per_k[0].first.samples), 1.0});
  }
  for (std::size_t i = 0; i < per_k.size(); ++i) {
    r.comparisons.push_back(
        {"aam_vs_mean_agg", k_list[i], mww_test(per_k[i].first.samples, per_k[i].second.samples), 1.0});
  }
  for (const auto& c : r.comparisons) raw.push_back(c.p_value);
  const auto adjusted = bonferroni(raw);
  for (std::size_t i = 0; i < adjusted.size(); ++i) r.comparisons[i].p_adjusted = adjusted[i];
  return r;
}

const AblationRow& AblationResult::largest_drop() const {
  if (rows.size() < 2) throw std::logic_error("ablation result has no removals");
  auto it = std::max_element(rows.begin() + 1, rows.end(),
                             [](const auto& a, const auto& b) { return a.f1_drop < b.f1_drop; });
  return *it;
}

AblationResult ablate_test_types(const dataset::Folds& folds, const model::Hyperparams& h,
                                 const training::TrainConfig& tc, std::size_t k_max,
                                 const ExperimentOptions& options) {
  const auto boot = single_threaded(options.bootstrap);
  const auto& types = dataset::all_test_types();
  std::vector<AblationRow> rows(types.size() + 1);

  parallel_for(rows.size(), options.threads, [&](std::size_t i) {
    dataset::Folds reduced = folds;
    std::string name = "all_tests";
    if (i > 0) {
      const auto t = types[i - 1];
      name = std::string(dataset::to_string(t));
      reduced = {dataset::remove_test_type(folds.train, t), dataset::remove_test_type(folds.validation, t),
                 dataset::remove_test_type(folds.test, t)};
    }
    const auto data = training::prepare_folds(std::move(reduced), k_max);
    const auto fit = training::fit_aam_fixed(data, h, tc);
    const auto scores = training::score_samples(fit.checkpoint, data.test);
    const auto labels = training::labels_of(data.test);
    const double thr = fit.checkpoint.threshold;
    const MetricFn f1_fn = [thr](auto s, auto l) { return confusion_metrics(s, l, thr).f1; };

    AblationRow& row = rows[i];
    row.removed = name;
    row.f1 = table_row(i == 0 ? "all_tests" : "without_" + name, k_max, "f1", f1_fn, scores, labels, boot);
    row.emptied_test = count_empty(data.test);
    row.emptied_total = count_empty(data.train) + count_empty(data.validation) + row.emptied_test;
  });

  for (auto& row : rows) row.f1_drop = rows.front().f1.point - row.f1.point;
  return {std::move(rows)};
}

std::vector<TableRow> ablation_table(const AblationResult& r, std::size_t k_max) {
  std::vector<TableRow> out;
  for (const auto& row : r.rows) {
    out.push_back(row.f1);
    out.back().k_max = k_max;
  }
  return out;
}

}  // namespace aam::evaluation
