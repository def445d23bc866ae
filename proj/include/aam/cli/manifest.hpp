#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace aam::cli {

inline constexpr std::string_view kToolVersion = "1.0.0";

struct FoldAccess {
  std::string fold;   // train, validation, test
  std::string stage;  // e.g. fit, model_selection, threshold, evaluate
};

// One per command run, written as run.json next to the outputs.
struct RunManifest {
  std::string command;
  std::string config_hash;  // FNV-1a over the canonical parameters (and config file contents)
  std::uint64_t master_seed = 0;
  nlohmann::json parameters = nlohmann::json::object();
  std::map<std::string, std::string> artifacts;  // name -> path
  std::vector<FoldAccess> fold_access;
  double wall_clock_seconds = 0.0;
  std::string tool_version{kToolVersion};

  void hash_parameters(std::string_view extra = {});
  nlohmann::json to_json() const;
  void write(const std::string& path) const;
};

std::string hex64(std::uint64_t v);

}  // namespace aam::cli
