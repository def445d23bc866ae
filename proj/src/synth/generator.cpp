#include "aam/synth/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "aam/common/seed.hpp"

namespace aam::synth {
namespace {

using dataset::Metric;
using dataset::TestType;

constexpr double kZ90 = 1.2815515655446004;  // standard normal 90th percentile
constexpr std::int64_t kDay = 86400;

struct Profile {
  int age = 0;
  int sex = 0;
  int has_ms = 0;
};

// Exact group counts, shuffled into participant order.
std::vector<Profile> assign_profiles(const SynthConfig& cfg, Rng& rng) {
  const std::size_t n = cfg.n_participants;
  const auto n_ms = static_cast<std::size_t>(std::llround(static_cast<double>(n) * cfg.ms_prevalence));
  const auto n_female = static_cast<std::size_t>(std::llround(static_cast<double>(n) * cfg.female_fraction));
  auto female_ms = static_cast<std::size_t>(std::llround(static_cast<double>(n_ms) * cfg.female_given_ms));
  female_ms = std::min({female_ms, n_female, n_ms});
  // Remaining women go to the healthy group, as far as it has room.
  const std::size_t n_healthy = n - n_ms;
  std::size_t female_healthy = std::min(n_female - female_ms, n_healthy);
  if (female_ms + female_healthy < n_female) female_ms = std::min(n_ms, n_female - female_healthy);

  std::vector<Profile> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n_ms; ++i) out.push_back({0, i < female_ms ? 1 : 0, 1});
  for (std::size_t i = 0; i < n_healthy; ++i) out.push_back({0, i < female_healthy ? 1 : 0, 0});
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

// Two-piece normal with the configured median and 10/90 quantiles, shifted
// by +/- half the MS age difference.
int draw_age(const SynthConfig& cfg, int has_ms, Rng& rng) {
  const double sd_low = (cfg.age_median - cfg.age_q10) / kZ90;
  const double sd_high = (cfg.age_q90 - cfg.age_median) / kZ90;
  const double z = std::normal_distribution<double>(0.0, 1.0)(rng);
  const double shift = (has_ms ? 0.5 : -0.5) * cfg.ms_age_shift;
  const double age = cfg.age_median + shift + z * (z < 0 ? sd_low : sd_high);
  return static_cast<int>(std::clamp(std::round(age), 18.0, 90.0));
}

int draw_usage_days(const SynthConfig& cfg, std::int64_t window_days, Rng& rng) {
  const double sigma = std::log(cfg.usage_p90_days / cfg.usage_median_days) / kZ90;
  std::lognormal_distribution<double> d(std::log(cfg.usage_median_days), sigma);
  const double days = std::round(d(rng));
  return static_cast<int>(std::clamp(days, 1.0, static_cast<double>(window_days)));
}

struct MetricShape {
  enum Kind { log_normal, count, mood, binary } kind;
  double location;
  double spread;
};

MetricShape shape_of(Metric m) {
  switch (m) {
    case Metric::mood_score: return {MetricShape::mood, 3.5, 0.9};
    case Metric::symbol_response_time: return {MetricShape::log_normal, 2.0, 0.25};
    case Metric::symbol_correct: return {MetricShape::count, 30.0, 5.0};
    case Metric::symbol_baseline_response_time: return {MetricShape::log_normal, 1.2, 0.2};
    case Metric::symbol_baseline_correct: return {MetricShape::count, 40.0, 5.0};
    case Metric::walking_steps: return {MetricShape::count, 600.0, 100.0};
    case Metric::uturn_turns: return {MetricShape::count, 12.0, 3.0};
    case Metric::uturn_turn_speed: return {MetricShape::log_normal, 1.5, 0.3};
    case Metric::balance_sway: return {MetricShape::log_normal, 0.05, 0.4};
    case Metric::mobility_life_space: return {MetricShape::log_normal, 5.0, 0.8};
    case Metric::pinching_count: return {MetricShape::count, 25.0, 6.0};
    case Metric::pinching_hand: return {MetricShape::binary, 0.0, 1.0};
    case Metric::drawing_hausdorff_square: return {MetricShape::log_normal, 12.0, 0.35};
    case Metric::drawing_hausdorff_circle: return {MetricShape::log_normal, 10.0, 0.35};
    case Metric::drawing_hausdorff_figure8: return {MetricShape::log_normal, 15.0, 0.35};
    case Metric::drawing_hausdorff_spiral: return {MetricShape::log_normal, 18.0, 0.35};
  }
  return {MetricShape::log_normal, 1.0, 1.0};
}

constexpr Metric kMood[] = {Metric::mood_score};
constexpr Metric kSymbol[] = {Metric::symbol_response_time, Metric::symbol_correct};
constexpr Metric kBaseline[] = {Metric::symbol_baseline_response_time, Metric::symbol_baseline_correct};
constexpr Metric kWalking[] = {Metric::walking_steps};
constexpr Metric kUturn[] = {Metric::uturn_turns, Metric::uturn_turn_speed};
constexpr Metric kBalance[] = {Metric::balance_sway};
constexpr Metric kMobility[] = {Metric::mobility_life_space};
constexpr Metric kPinching[] = {Metric::pinching_count, Metric::pinching_hand};
constexpr Metric kDrawing[] = {Metric::drawing_hausdorff_square, Metric::drawing_hausdorff_circle,
                               Metric::drawing_hausdorff_figure8, Metric::drawing_hausdorff_spiral};

std::string participant_id(std::size_t i, std::size_t n) {
  const std::size_t width = std::max<std::size_t>(4, std::to_string(n).size());
  std::string digits = std::to_string(i + 1);
  return "P" + std::string(width - std::min(width, digits.size()), '0') + digits;
}

class ParticipantGenerator {
 public:
  ParticipantGenerator(const SynthConfig& cfg, const Profile& profile, std::uint64_t seed)
      : cfg_(cfg), profile_(profile), rng_(seed) {
    std::normal_distribution<double> n01(0.0, 1.0);
    for (auto& u : subject_effect_) u = n01(rng_);
  }

  std::vector<dataset::TestResult> run() {
    const std::int64_t window_days = (cfg_.window_end - cfg_.window_start) / kDay;
    const int days = draw_usage_days(cfg_, window_days, rng_);
    const std::int64_t start_day =
        std::uniform_int_distribution<std::int64_t>(0, std::max<std::int64_t>(0, window_days - days))(rng_);
    const double p_active =
        std::min(1.0, cfg_.adherence * (profile_.has_ms ? cfg_.ms_adherence_multiplier : 1.0));

    std::vector<dataset::TestResult> out;
    std::bernoulli_distribution active(p_active);
    for (int d = 0; d < days; ++d) {
      const bool boundary = d == 0 || d == days - 1;
      if (!boundary && !active(rng_)) continue;
      session(cfg_.window_start + (start_day + d) * kDay, boundary, out);
    }
    if (days == 1) session(cfg_.window_start + start_day * kDay + 12 * 3600, true, out);
    return out;
  }

 private:
  void session(std::int64_t day_start, bool full_suite, std::vector<dataset::TestResult>& out) {
    // Sessions start between 08:00 and 12:00, tests follow each other by 1-4 minutes.
    std::int64_t t = day_start + std::uniform_int_distribution<std::int64_t>(8 * 3600, 12 * 3600)(rng_);
    for (auto type : dataset::all_test_types()) {
      if (!full_suite && !std::bernoulli_distribution(cfg_.test_probability[dataset::index_of(type)])(rng_)) {
        continue;
      }
      t += std::uniform_int_distribution<std::int64_t>(60, 240)(rng_);
      for (Metric m : metrics_of(type)) out.push_back({type, m, record_value(m), t});
    }
  }

  double record_value(Metric m) {
    const auto i = dataset::index_of(m);
    const double rho = cfg_.participant_correlation;
    const double e = std::normal_distribution<double>(0.0, 1.0)(rng_);
    const double z = cfg_.effect_size[i] * profile_.has_ms + std::sqrt(rho) * subject_effect_[i] +
                     std::sqrt(1.0 - rho) * e;
    return metric_value(m, z);
  }

  const SynthConfig& cfg_;
  Profile profile_;
  Rng rng_;
  std::array<double, dataset::kMetricCount> subject_effect_{};
};

}  // namespace

std::span<const Metric> metrics_of(TestType t) {
  switch (t) {
    case TestType::mood: return kMood;
    case TestType::symbol_matching: return kSymbol;
    case TestType::symbol_baseline: return kBaseline;
    case TestType::walking: return kWalking;
    case TestType::uturn: return kUturn;
    case TestType::balance: return kBalance;
    case TestType::mobility: return kMobility;
    case TestType::pinching: return kPinching;
    case TestType::drawing: return kDrawing;
  }
  return {};
}

double metric_value(Metric m, double z) {
  const auto s = shape_of(m);
  switch (s.kind) {
    case MetricShape::log_normal: return std::round(s.location * std::exp(s.spread * z) * 1e6) / 1e6;
    case MetricShape::count: return std::max(0.0, std::round(s.location + s.spread * z));
    case MetricShape::mood: return std::clamp(std::round(s.location + s.spread * z), 1.0, 5.0);
    case MetricShape::binary: return z > 0.0 ? 1.0 : 0.0;
  }
  return z;
}

dataset::Cohort generate_cohort(const SynthConfig& cfg) {
  cfg.validate();
  Rng label_rng(derive_seed(cfg.seed, "synth-labels"));
  auto profiles = assign_profiles(cfg, label_rng);
  dataset::Cohort c;
  c.participants.reserve(profiles.size());
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    Rng age_rng(derive_seed(cfg.seed, "synth-age", i));
    profiles[i].age = draw_age(cfg, profiles[i].has_ms, age_rng);
    ParticipantGenerator gen(cfg, profiles[i], derive_seed(cfg.seed, "synth-participant", i));
    c.participants.push_back({participant_id(i, profiles.size()), profiles[i].age, profiles[i].sex,
                              profiles[i].has_ms, gen.run()});
  }
  return c;
}

}  // namespace aam::synth
