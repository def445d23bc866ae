#include "aam/cli/manifest.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "aam/common/seed.hpp"

namespace aam::cli {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void RunManifest::hash_parameters(std::string_view extra) {
  config_hash = hex64(fnv1a64(command + '\n' + parameters.dump() + '\n' + std::string(extra)));
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json folds = nlohmann::json::array();
  for (const auto& f : fold_access) folds.push_back({{"fold", f.fold}, {"stage", f.stage}});
  return {{"command", command},
          {"config_hash", config_hash},
          {"master_seed", master_seed},
          {"parameters", parameters},
          {"artifacts", artifacts},
          {"fold_access", folds},
          {"wall_clock_seconds", wall_clock_seconds},
          {"tool_version", tool_version}};
}

void RunManifest::write(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write manifest: " + path);
  out << to_json().dump(2) << '\n';
}

}  // namespace aam::cli
