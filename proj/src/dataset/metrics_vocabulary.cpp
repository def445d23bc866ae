#include <stdexcept>

#include "aam/dataset/vocabulary.hpp"

namespace aam::dataset {
namespace {

constexpr std::array<std::string_view, kTestTypeCount> kTestTypeNames = {
    "mood", "symbol_matching", "symbol_baseline", "walking", "uturn",
    "balance", "mobility", "pinching", "drawing",
};

constexpr std::array<std::string_view, kMetricCount> kMetricNames = {
    "mood_score",
    "symbol_response_time",
    "symbol_correct",
    "symbol_baseline_response_time",
    "symbol_baseline_correct",
    "walking_steps",
    "uturn_turns",
    "uturn_turn_speed",
    "balance_sway",
    "mobility_life_space",
    "pinching_count",
    "pinching_hand",
    "drawing_hausdorff_square",
    "drawing_hausdorff_circle",
    "drawing_hausdorff_figure8",
    "drawing_hausdorff_spiral",
};

constexpr std::array<TestType, kMetricCount> kMetricOwner = {
    TestType::mood,
    TestType::symbol_matching,
    TestType::symbol_matching,
    TestType::symbol_baseline,
    TestType::symbol_baseline,
    TestType::walking,
    TestType::uturn,
    TestType::uturn,
    TestType::balance,
    TestType::mobility,
    TestType::pinching,
    TestType::pinching,
    TestType::drawing,
    TestType::drawing,
    TestType::drawing,
    TestType::drawing,
};

}  // namespace

const std::array<Metric, kMetricCount>& all_metrics() {
  static const auto metrics = [] {
    std::array<Metric, kMetricCount> out{};
    for (std::size_t i = 0; i < kMetricCount; ++i) out[i] = static_cast<Metric>(i);
    return out;
  }();
  return metrics;
}

const std::array<TestType, kTestTypeCount>& all_test_types() {
  static const auto types = [] {
    std::array<TestType, kTestTypeCount> out{};
    for (std::size_t i = 0; i < kTestTypeCount; ++i) out[i] = static_cast<TestType>(i);
    return out;
  }();
  return types;
}

TestType test_type_of(Metric m) { return kMetricOwner.at(index_of(m)); }

std::string_view to_string(TestType t) { return kTestTypeNames.at(index_of(t)); }
std::string_view to_string(Metric m) { return kMetricNames.at(index_of(m)); }

std::optional<TestType> parse_test_type(std::string_view name) {
  for (std::size_t i = 0; i < kTestTypeCount; ++i) {
    if (kTestTypeNames[i] == name) return static_cast<TestType>(i);
  }
  return std::nullopt;
}

std::optional<Metric> parse_metric(std::string_view name) {
  for (std::size_t i = 0; i < kMetricCount; ++i) {
    if (kMetricNames[i] == name) return static_cast<Metric>(i);
  }
  return std::nullopt;
}

}  // namespace aam::dataset
