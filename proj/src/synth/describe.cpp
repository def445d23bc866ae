#include "aam/synth/describe.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace aam::synth {
namespace {

MedianRange median_range(const std::vector<double>& v) {
  return {dataset::nearest_rank_quantile(v, 0.5), dataset::nearest_rank_quantile(v, 0.1),
          dataset::nearest_rank_quantile(v, 0.9)};
}

std::string fixed1(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

std::string cell(const MedianRange& r) {
  return fixed1(r.median) + " (" + fixed1(r.q10) + ", " + fixed1(r.q90) + ")";
}

}  // namespace

int usage_days(const dataset::Participant& p) {
  if (p.results.empty()) return 0;
  constexpr std::int64_t day = 86400;
  const auto first = p.results.front().timestamp / day;
  const auto last = p.results.back().timestamp / day;
  return static_cast<int>(last - first + 1);
}

CohortSummary describe_cohort(const dataset::Cohort& c, const std::string& name, std::size_t total) {
  if (c.empty()) throw std::invalid_argument("describe_cohort: fold '" + name + "' has no participants");
  CohortSummary s;
  s.fold = name;
  s.subjects = c.size();
  s.subjects_percent = total == 0 ? 100.0 : 100.0 * static_cast<double>(c.size()) / static_cast<double>(total);
  std::vector<double> ages, usage;
  double ms = 0, female = 0;
  for (const auto& p : c.participants) {
    ms += p.has_ms;
    female += p.sex;
    ages.push_back(p.age);
    usage.push_back(usage_days(p));
  }
  const auto n = static_cast<double>(c.size());
  s.ms_percent = 100.0 * ms / n;
  s.female_percent = 100.0 * female / n;
  s.age = median_range(ages);
  s.usage_days = median_range(usage);
  return s;
}

std::vector<CohortSummary> describe_folds(const dataset::Folds& folds) {
  const std::size_t total = folds.train.size() + folds.validation.size() + folds.test.size();
  dataset::Cohort all = folds.train;
  for (const auto* f : {&folds.validation, &folds.test}) {
    all.participants.insert(all.participants.end(), f->participants.begin(), f->participants.end());
  }
  return {describe_cohort(folds.train, "Training", total), describe_cohort(folds.validation, "Validation", total),
          describe_cohort(folds.test, "Test", total), describe_cohort(all, "Total", total)};
}

void write_summary_table(std::ostream& out, const std::vector<CohortSummary>& rows) {
  std::vector<std::vector<std::string>> cells = {kSummaryColumns};
  for (const auto& r : rows) {
    cells.push_back({r.fold, std::to_string(r.subjects) + " (" + fixed1(r.subjects_percent) + ")",
                     fixed1(r.ms_percent), fixed1(r.female_percent), cell(r.age), cell(r.usage_days)});
  }
  std::vector<std::size_t> width(kSummaryColumns.size(), 0);
  for (const auto& row : cells) {
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  for (const auto& row : cells) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << row[i] << std::string(width[i] - row[i].size(), ' ') << (i + 1 < row.size() ? " | " : "\n");
    }
  }
}

}  // namespace aam::synth
