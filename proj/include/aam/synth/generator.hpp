#pragma once

#include <span>

#include "aam/dataset/cohort.hpp"
#include "aam/synth/config.hpp"

namespace aam::synth {

// Deterministic in the config. Group sizes are exact: round(n * ms_prevalence)
// participants with MS, round(n * female_fraction) women of which
// round(n_ms * female_given_ms) have MS. Every participant has a full test suite
// on their first and last usage day, so at least 32 records.
dataset::Cohort generate_cohort(const SynthConfig& cfg);

// Latent-to-domain mapping used for a metric (exposed for tests).
double metric_value(dataset::Metric m, double z);

// Records a test of this type produces (e.g. drawing yields four shapes).
std::span<const dataset::Metric> metrics_of(dataset::TestType t);

}  // namespace aam::synth
