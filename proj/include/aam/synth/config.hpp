#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "aam/dataset/vocabulary.hpp"

namespace aam::synth {

// Generative description of a synthetic cohort. Each metric record is driven
// by a latent standard normal z = d_m * has_ms + sqrt(rho) u + sqrt(1 - rho) e,
// where u is a per-(participant, metric) effect and e per-record noise, then
// mapped monotonically into the metric's native domain.
struct SynthConfig {
  std::size_t n_participants = 774;
  double ms_prevalence = 0.52;
  double female_fraction = 0.60;
  double female_given_ms = 0.70;  // set equal to female_fraction to remove sex enrichment
  double age_median = 41.0;
  double age_q10 = 27.0;
  double age_q90 = 59.0;
  double ms_age_shift = 4.0;      // MS minus healthy median age, years
  double usage_median_days = 21.0;
  double usage_p90_days = 190.0;
  double adherence = 0.12;        // probability that an intermediate day has a session
  double ms_adherence_multiplier = 1.4;
  double participant_correlation = 0.25;  // rho
  std::array<double, dataset::kMetricCount> effect_size{};    // d_m
  std::array<double, dataset::kTestTypeCount> test_probability{};  // per session day
  std::int64_t window_start = 1524441600;  // 2018-04-23
  std::int64_t window_end = 1567036800;    // 2019-08-29
  std::uint64_t seed = 0;

  SynthConfig();

  // Throws std::invalid_argument on out-of-range fields.
  void validate() const;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Flat "key = value" text; '#' starts a comment. Keys are the field names above,
// plus effect.<metric> and test_probability.<test_type>. Unknown keys and
// malformed values throw ConfigError. Unset keys keep their defaults.
SynthConfig parse_synth_config(std::istream& in);
SynthConfig read_synth_config(const std::string& path);
void write_synth_config(std::ostream& out, const SynthConfig& cfg);

}  // namespace aam::synth
