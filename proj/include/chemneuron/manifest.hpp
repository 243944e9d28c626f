#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace chemneuron {

/// Reproducibility record written next to every experiment's outputs:
/// the knobs that went in, the seeds that were derived, and how long it
/// took. Re-running the recorded command yields byte-identical CSVs.
struct RunManifest {
  std::string command;
  std::string tool_version;
  std::uint64_t master_seed = 0;
  std::vector<std::uint64_t> derived_seeds;
  std::map<std::string, std::string> parameters;  // flat key/value snapshot
  std::vector<std::string> outputs;               // files written, relative
  double wall_seconds = 0.0;

  std::string to_json() const;
  static RunManifest from_json(const std::string& text);
};

}  // namespace chemneuron
