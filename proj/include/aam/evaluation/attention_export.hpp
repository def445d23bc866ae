#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "aam/training/checkpoint.hpp"

namespace aam::evaluation {

inline constexpr std::size_t kTopInstances = 5;

// One test instance: all metric records of a test type sharing a timestamp.
struct AttentionEntry {
  int day = 0;  // whole days since the participant's first record
  dataset::TestType test_type = dataset::TestType::mood;
  std::int64_t timestamp = 0;
  double total_attention = 0.0;
  bool top5 = false;
};

struct AttentionTimeline {
  std::string participant;
  double score = 0.5;
  double threshold = 0.5;
  std::size_t records = 0;  // records seen by the model (after k_max truncation)
  std::vector<AttentionEntry> entries;  // chronological
};

// Groups the per-record attention factors of an AAM checkpoint into test
// instances. Throws std::invalid_argument for participants without records.
AttentionTimeline export_attention(const training::Checkpoint& ckpt, const dataset::Participant& p);

// {"day":int,"test_type":str,"total_attention":float,"top5":bool} per line.
void write_attention_jsonl(std::ostream& out, const AttentionTimeline& t);

nlohmann::json attention_summary(const AttentionTimeline& t);

}  // namespace aam::evaluation
