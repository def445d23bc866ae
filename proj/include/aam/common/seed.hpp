#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace aam {

using Rng = std::mt19937_64;

// Counter-based sub-seed derivation: every stochastic stage of a run draws
// its seed from (master, stage label, index) so that stages stay independent
// of each other and of thread scheduling.
std::uint64_t derive_seed(std::uint64_t master, std::string_view label, std::uint64_t index = 0);

std::uint64_t splitmix64(std::uint64_t x);

// 64-bit FNV-1a, used for stable content hashes in manifests.
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace aam
