#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "aam/common/format.hpp"
#include "aam/common/log.hpp"
#include "aam/dataset/cohort.hpp"

namespace aam::dataset {
namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

template <class T>
bool parse_number(std::string_view s, T& out) {
  if (s.empty()) return false;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

struct PendingParticipant {
  Participant participant;
  bool excluded = false;
  std::set<std::tuple<std::int64_t, int>> seen;  // (timestamp, metric)
};

}  // namespace

const Participant* Cohort::find(std::string_view id) const {
  auto it = std::find_if(participants.begin(), participants.end(),
                         [&](const Participant& p) { return p.id == id; });
  return it == participants.end() ? nullptr : &*it;
}

Cohort parse_cohort(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError(1, "missing header");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line.erase(0, 3);  // UTF-8 BOM
  if (line != kCohortCsvHeader) {
    throw ParseError(1, "unexpected header '" + line + "', expected '" + std::string(kCohortCsvHeader) + "'");
  }

  std::vector<PendingParticipant> pending;
  std::unordered_map<std::string, std::size_t> index;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_fields(line);
    if (f.size() != 8) {
      throw ParseError(line_no, "expected 8 fields, found " + std::to_string(f.size()));
    }
    const std::string id(f[0]);
    if (id.empty()) throw ParseError(line_no, "empty participant_id");

    auto [it, inserted] = index.try_emplace(id, pending.size());
    if (inserted) {
      pending.emplace_back();
      pending.back().participant.id = id;
    }
    PendingParticipant& pp = pending[it->second];

    const bool missing_demo = f[1].empty() || f[2].empty();
    int age = 0;
    int sex = 0;
    if (!missing_demo) {
      if (!parse_number(f[1], age) || age < 0) throw ParseError(line_no, "invalid age '" + std::string(f[1]) + "'");
      if (f[2] == "F") {
        sex = 1;
      } else if (f[2] == "M") {
        sex = 0;
      } else {
        throw ParseError(line_no, "invalid sex '" + std::string(f[2]) + "' (expected F or M)");
      }
    }
    int has_ms = 0;
    if (!parse_number(f[3], has_ms) || (has_ms != 0 && has_ms != 1)) {
      throw ParseError(line_no, "invalid has_ms '" + std::string(f[3]) + "'");
    }
    const auto test_type = parse_test_type(f[4]);
    if (!test_type) throw ParseError(line_no, "unknown test_type '" + std::string(f[4]) + "'");
    const auto metric = parse_metric(f[5]);
    if (!metric) throw ParseError(line_no, "unknown metric '" + std::string(f[5]) + "'");
    if (test_type_of(*metric) != *test_type) {
      throw ParseError(line_no, "metric '" + std::string(f[5]) + "' does not belong to test_type '" +
                                    std::string(f[4]) + "'");
    }
    double value = 0.0;
    if (!parse_number(f[6], value) || !std::isfinite(value)) {
      throw ParseError(line_no, "invalid value '" + std::string(f[6]) + "'");
    }
    std::int64_t ts = 0;
    if (!parse_number(f[7], ts) || ts <= 0) {
      throw ParseError(line_no, "invalid timestamp_s '" + std::string(f[7]) + "'");
    }

    Participant& p = pp.participant;
    if (missing_demo) {
      if (!pp.excluded) warn("participant '" + id + "' has missing age/sex (line " + std::to_string(line_no) + "); excluded");
      pp.excluded = true;
      continue;
    }
    if (p.results.empty() && pp.seen.empty()) {
      p.age = age;
      p.sex = sex;
      p.has_ms = has_ms;
    } else if (p.age != age || p.sex != sex || p.has_ms != has_ms) {
      warn("participant '" + id + "' has inconsistent demographics at line " + std::to_string(line_no) +
           "; keeping first values");
    }
    if (!pp.seen.emplace(ts, static_cast<int>(index_of(*metric))).second) {
      warn("duplicate record for participant '" + id + "' (timestamp " + std::to_string(ts) + ", metric " +
           std::string(f[5]) + ") at line " + std::to_string(line_no) + "; keeping first");
      continue;
    }
    p.results.push_back({*test_type, *metric, value, ts});
  }

  Cohort cohort;
  for (auto& pp : pending) {
    if (pp.excluded) continue;
    auto& results = pp.participant.results;
    std::stable_sort(results.begin(), results.end(),
                     [](const TestResult& a, const TestResult& b) { return a.timestamp < b.timestamp; });
    cohort.participants.push_back(std::move(pp.participant));
  }
  return cohort;
}

Cohort read_cohort_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open cohort file '" + path + "'");
  return parse_cohort(in);
}

void write_cohort(std::ostream& out, const Cohort& cohort) {
  out << kCohortCsvHeader << '\n';
  for (const auto& p : cohort.participants) {
    if (p.id.find_first_of(",\n\r") != std::string::npos) {
      throw std::invalid_argument("participant id '" + p.id + "' contains a delimiter");
    }
    const std::string prefix = p.id + ',' + std::to_string(p.age) + ',' + (p.sex == 1 ? "F" : "M") + ',' +
                               std::to_string(p.has_ms) + ',';
    for (const auto& r : p.results) {
      out << prefix << to_string(r.test_type) << ',' << to_string(r.metric) << ',' << format_double(r.value)
          << ',' << r.timestamp << '\n';
    }
  }
}

void write_cohort_file(const std::string& path, const Cohort& cohort) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write cohort file '" + path + "'");
  write_cohort(out, cohort);
  if (!out) throw std::runtime_error("failed writing cohort file '" + path + "'");
}

Cohort filter_min_tests(const Cohort& cohort, std::size_t min_count) {
  Cohort out;
  for (const auto& p : cohort.participants) {
    if (p.results.size() >= min_count) out.participants.push_back(p);
  }
  return out;
}

Cohort remove_test_type(const Cohort& cohort, TestType removed) {
  Cohort out = cohort;
  for (auto& p : out.participants) {
    std::erase_if(p.results, [&](const TestResult& r) { return r.test_type == removed; });
  }
  return out;
}

}  // namespace aam::dataset
