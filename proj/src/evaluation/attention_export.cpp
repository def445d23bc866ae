#include "aam/evaluation/attention_export.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace aam::evaluation {

AttentionTimeline export_attention(const training::Checkpoint& ckpt, const dataset::Participant& p) {
  if (p.results.empty()) throw std::invalid_argument("participant " + p.id + " has no test results");
  const auto fs = dataset::truncate(dataset::build_features(p, ckpt.normalizer), ckpt.k_max);
  dataset::Sample s{p.id, fs, dataset::demographics_of(p), p.has_ms};
  const auto pred = training::predict_with_attention(ckpt, s);

  AttentionTimeline t;
  t.participant = p.id;
  t.score = pred.score;
  t.threshold = ckpt.threshold;
  t.records = fs.count();

  const std::int64_t first = p.results.front().timestamp;
  std::map<std::pair<std::int64_t, int>, std::size_t> index;
  for (std::size_t i = 0; i < t.records; ++i) {
    const auto& r = p.results[i];
    const auto key = std::make_pair(r.timestamp, static_cast<int>(r.test_type));
    auto [it, inserted] = index.try_emplace(key, t.entries.size());
    if (inserted) {
      t.entries.push_back({static_cast<int>((r.timestamp - first) / 86400), r.test_type, r.timestamp, 0.0, false});
    }
    t.entries[it->second].total_attention += pred.attention[i];
  }
  std::stable_sort(t.entries.begin(), t.entries.end(), [](const auto& a, const auto& b) {
    return a.timestamp != b.timestamp ? a.timestamp < b.timestamp : a.test_type < b.test_type;
  });

  std::vector<std::size_t> order(t.entries.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return t.entries[a].total_attention > t.entries[b].total_attention;
  });
  for (std::size_t i = 0; i < std::min(kTopInstances, order.size()); ++i) t.entries[order[i]].top5 = true;
  return t;
}

void write_attention_jsonl(std::ostream& out, const AttentionTimeline& t) {
  for (const auto& e : t.entries) {
    nlohmann::json j = {{"day", e.day},
                        {"test_type", dataset::to_string(e.test_type)},
                        {"total_attention", e.total_attention},
                        {"top5", e.top5}};
    out << j.dump() << '\n';
  }
}

nlohmann::json attention_summary(const AttentionTimeline& t) {
  return {{"participant", t.participant},
          {"score", t.score},
          {"threshold", t.threshold},
          {"predicted_positive", t.score >= t.threshold},
          {"records", t.records},
          {"instances", t.entries.size()}};
}

}  // namespace aam::evaluation
