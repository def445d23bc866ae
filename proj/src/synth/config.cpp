#include "aam/synth/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include "aam/common/format.hpp"

namespace aam::synth {
namespace {

using dataset::Metric;
using dataset::TestType;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

template <class T>
T parse_value(std::string_view key, std::string_view text) {
  T v{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError("bad value for '" + std::string(key) + "': '" + std::string(text) + "'");
  }
  return v;
}

using Setter = std::function<void(SynthConfig&, std::string_view key, std::string_view value)>;

template <class T>
Setter field(T SynthConfig::*member) {
  return [member](SynthConfig& c, std::string_view k, std::string_view v) { c.*member = parse_value<T>(k, v); };
}

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = [] {
    std::map<std::string, Setter, std::less<>> t = {
        {"n_participants", field(&SynthConfig::n_participants)},
        {"ms_prevalence", field(&SynthConfig::ms_prevalence)},
        {"female_fraction", field(&SynthConfig::female_fraction)},
        {"female_given_ms", field(&SynthConfig::female_given_ms)},
        {"age_median", field(&SynthConfig::age_median)},
        {"age_q10", field(&SynthConfig::age_q10)},
        {"age_q90", field(&SynthConfig::age_q90)},
        {"ms_age_shift", field(&SynthConfig::ms_age_shift)},
        {"usage_median_days", field(&SynthConfig::usage_median_days)},
        {"usage_p90_days", field(&SynthConfig::usage_p90_days)},
        {"adherence", field(&SynthConfig::adherence)},
        {"ms_adherence_multiplier", field(&SynthConfig::ms_adherence_multiplier)},
        {"participant_correlation", field(&SynthConfig::participant_correlation)},
        {"window_start", field(&SynthConfig::window_start)},
        {"window_end", field(&SynthConfig::window_end)},
        {"seed", field(&SynthConfig::seed)},
    };
    for (auto m : dataset::all_metrics()) {
      t.emplace("effect." + std::string(dataset::to_string(m)), [m](SynthConfig& c, auto k, auto v) {
        c.effect_size[dataset::index_of(m)] = parse_value<double>(k, v);
      });
    }
    for (auto tt : dataset::all_test_types()) {
      t.emplace("test_probability." + std::string(dataset::to_string(tt)), [tt](SynthConfig& c, auto k, auto v) {
        c.test_probability[dataset::index_of(tt)] = parse_value<double>(k, v);
      });
    }
    return t;
  }();
  return table;
}

void check_unit(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
}

}  // namespace

SynthConfig::SynthConfig() {
  auto set_effect = [this](Metric m, double d) { effect_size[dataset::index_of(m)] = d; };
  set_effect(Metric::mood_score, -0.6);
  set_effect(Metric::drawing_hausdorff_square, 0.45);
  set_effect(Metric::drawing_hausdorff_circle, 0.45);
  set_effect(Metric::drawing_hausdorff_figure8, 0.45);
  set_effect(Metric::drawing_hausdorff_spiral, 0.45);
  set_effect(Metric::symbol_response_time, 0.15);
  set_effect(Metric::symbol_correct, -0.1);
  set_effect(Metric::walking_steps, -0.15);
  set_effect(Metric::uturn_turn_speed, -0.1);
  set_effect(Metric::balance_sway, 0.1);
  set_effect(Metric::mobility_life_space, -0.1);
  set_effect(Metric::pinching_count, -0.1);

  auto set_prob = [this](TestType t, double p) { test_probability[dataset::index_of(t)] = p; };
  set_prob(TestType::mood, 0.9);
  set_prob(TestType::symbol_matching, 0.5);
  set_prob(TestType::symbol_baseline, 0.3);
  set_prob(TestType::walking, 0.4);
  set_prob(TestType::uturn, 0.4);
  set_prob(TestType::balance, 0.4);
  set_prob(TestType::mobility, 0.6);
  set_prob(TestType::pinching, 0.4);
  set_prob(TestType::drawing, 0.4);
}

void SynthConfig::validate() const {
  if (n_participants < 1) throw std::invalid_argument("n_participants must be >= 1");
  check_unit(ms_prevalence, "ms_prevalence");
  check_unit(female_fraction, "female_fraction");
  check_unit(female_given_ms, "female_given_ms");
  check_unit(adherence, "adherence");
  check_unit(participant_correlation, "participant_correlation");
  for (double p : test_probability) check_unit(p, "test_probability");
  for (double d : effect_size) {
    if (!std::isfinite(d)) throw std::invalid_argument("effect sizes must be finite");
  }
  if (!(age_q10 < age_median && age_median < age_q90)) {
    throw std::invalid_argument("age quantiles must satisfy q10 < median < q90");
  }
  if (!(usage_median_days >= 1.0 && usage_p90_days > usage_median_days)) {
    throw std::invalid_argument("usage days need median >= 1 and p90 > median");
  }
  if (!(ms_adherence_multiplier >= 0.0) || !std::isfinite(ms_age_shift)) {
    throw std::invalid_argument("ms_adherence_multiplier must be >= 0 and ms_age_shift finite");
  }
  if (window_end - window_start < 86400) throw std::invalid_argument("study window must span at least one day");
}

SynthConfig parse_synth_config(std::istream& in) {
  SynthConfig c;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view s = line;
    if (auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const auto key = trim(s.substr(0, eq));
    const auto value = trim(s.substr(eq + 1));
    auto it = setters().find(key);
    if (it == setters().end()) {
      throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
    }
    it->second(c, key, value);
  }
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return c;
}

SynthConfig read_synth_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  return parse_synth_config(in);
}

void write_synth_config(std::ostream& out, const SynthConfig& c) {
  out << "n_participants = " << c.n_participants << '\n'
      << "ms_prevalence = " << format_double(c.ms_prevalence) << '\n'
      << "female_fraction = " << format_double(c.female_fraction) << '\n'
      << "female_given_ms = " << format_double(c.female_given_ms) << '\n'
      << "age_median = " << format_double(c.age_median) << '\n'
      << "age_q10 = " << format_double(c.age_q10) << '\n'
      << "age_q90 = " << format_double(c.age_q90) << '\n'
      << "ms_age_shift = " << format_double(c.ms_age_shift) << '\n'
      << "usage_median_days = " << format_double(c.usage_median_days) << '\n'
      << "usage_p90_days = " << format_double(c.usage_p90_days) << '\n'
      << "adherence = " << format_double(c.adherence) << '\n'
      << "ms_adherence_multiplier = " << format_double(c.ms_adherence_multiplier) << '\n'
      << "participant_correlation = " << format_double(c.participant_correlation) << '\n'
      << "window_start = " << c.window_start << '\n'
      << "window_end = " << c.window_end << '\n'
      << "seed = " << c.seed << '\n';
  for (auto m : dataset::all_metrics()) {
    out << "effect." << dataset::to_string(m) << " = " << format_double(c.effect_size[dataset::index_of(m)]) << '\n';
  }
  for (auto t : dataset::all_test_types()) {
    out << "test_probability." << dataset::to_string(t) << " = " << format_double(c.test_probability[dataset::index_of(t)]) << '\n';
  }
}

}  // namespace aam::synth
