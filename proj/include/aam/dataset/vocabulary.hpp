#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace aam::dataset {

enum class TestType {
  mood,
  symbol_matching,
  symbol_baseline,
  walking,
  uturn,
  balance,
  mobility,
  pinching,
  drawing,
};

inline constexpr std::size_t kTestTypeCount = 9;

enum class Metric {
  mood_score,
  symbol_response_time,
  symbol_correct,
  symbol_baseline_response_time,
  symbol_baseline_correct,
  walking_steps,
  uturn_turns,
  uturn_turn_speed,
  balance_sway,
  mobility_life_space,
  pinching_count,
  pinching_hand,
  drawing_hausdorff_square,
  drawing_hausdorff_circle,
  drawing_hausdorff_figure8,
  drawing_hausdorff_spiral,
};

inline constexpr std::size_t kMetricCount = 16;

constexpr std::size_t index_of(Metric m) { return static_cast<std::size_t>(m); }
constexpr std::size_t index_of(TestType t) { return static_cast<std::size_t>(t); }

const std::array<Metric, kMetricCount>& all_metrics();
const std::array<TestType, kTestTypeCount>& all_test_types();

TestType test_type_of(Metric m);

std::string_view to_string(TestType t);
std::string_view to_string(Metric m);

std::optional<TestType> parse_test_type(std::string_view name);
std::optional<Metric> parse_metric(std::string_view name);

}  // namespace aam::dataset
