#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "aam/dataset/folds.hpp"

namespace aam::synth {

struct MedianRange {
  double median = 0.0;
  double q10 = 0.0;
  double q90 = 0.0;
};

// One row of the cohort statistics table.
struct CohortSummary {
  std::string fold;
  std::size_t subjects = 0;
  double subjects_percent = 0.0;  // share of all summarised participants
  double ms_percent = 0.0;
  double female_percent = 0.0;
  MedianRange age;
  MedianRange usage_days;  // calendar days from first to last record, inclusive
};

inline const std::vector<std::string> kSummaryColumns = {"Fold", "Subjects (%)", "MS (%)", "Female (%)",
                                                         "Age (years)", "Usage days"};

// Nearest-rank quantiles. Throws std::invalid_argument for an empty cohort.
CohortSummary describe_cohort(const dataset::Cohort& c, const std::string& name, std::size_t total);

int usage_days(const dataset::Participant& p);

// Training, validation, test rows and a total row. Empty folds are rejected.
std::vector<CohortSummary> describe_folds(const dataset::Folds& folds);

// Aligned text table; median cells read "41.0 (27.0, 59.0)".
void write_summary_table(std::ostream& out, const std::vector<CohortSummary>& rows);

}  // namespace aam::synth
