#include "chemneuron/manifest.hpp"

#include "json.hpp"

#include "chemneuron/errors.hpp"

namespace chemneuron {

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["tool_version"] = tool_version;
  j["master_seed"] = master_seed;
  j["derived_seeds"] = derived_seeds;
  j["parameters"] = parameters;
  j["outputs"] = outputs;
  j["wall_seconds"] = wall_seconds;
  return j.dump(2) + "\n";
}

RunManifest RunManifest::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what(), 1, static_cast<int>(e.byte));
  }
  RunManifest m;
  try {
    j.at("command").get_to(m.command);
    j.at("tool_version").get_to(m.tool_version);
    j.at("master_seed").get_to(m.master_seed);
    j.at("derived_seeds").get_to(m.derived_seeds);
    j.at("parameters").get_to(m.parameters);
    j.at("outputs").get_to(m.outputs);
    j.at("wall_seconds").get_to(m.wall_seconds);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(e.what(), 1, 1);
  }
  return m;
}

}  // namespace chemneuron
