#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "aam/dataset/vocabulary.hpp"

namespace aam::dataset {

struct TestResult {
  TestType test_type = TestType::mood;
  Metric metric = Metric::mood_score;
  double value = 0.0;
  std::int64_t timestamp = 0;  // seconds since epoch

  bool operator==(const TestResult&) const = default;
};

struct Participant {
  std::string id;
  int age = 0;     // years
  int sex = 0;     // 1 = female, 0 = male
  int has_ms = 0;  // diagnosis label
  std::vector<TestResult> results;  // non-decreasing timestamps

  bool operator==(const Participant&) const = default;
};

struct Cohort {
  std::vector<Participant> participants;

  std::size_t size() const { return participants.size(); }
  bool empty() const { return participants.empty(); }
  const Participant* find(std::string_view id) const;

  bool operator==(const Cohort&) const = default;
};

inline constexpr std::string_view kCohortCsvHeader =
    "participant_id,age,sex,has_ms,test_type,metric,value,timestamp_s";

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Reads the cohort CSV. Participants appear in order of first occurrence;
// each participant's results are stably sorted by timestamp. Duplicate
// (id, timestamp, metric) rows keep the first occurrence and warn. Rows with
// an empty age or sex exclude the participant (with a warning).
Cohort parse_cohort(std::istream& in);
Cohort read_cohort_file(const std::string& path);

// Writes the exact CSV schema; values use the shortest round-trip representation.
void write_cohort(std::ostream& out, const Cohort& cohort);
void write_cohort_file(const std::string& path, const Cohort& cohort);

Cohort filter_min_tests(const Cohort& cohort, std::size_t min_count);

// Keeps only records whose test type is not `removed`; participants are kept even if emptied.
Cohort remove_test_type(const Cohort& cohort, TestType removed);

}  // namespace aam::dataset
