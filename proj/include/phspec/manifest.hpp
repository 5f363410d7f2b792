// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "phspec/version.hpp"

namespace phspec::io {

/// Provenance record written next to every output file. nlohmann::json keeps
/// object keys in std::map order, so dumps come out sorted.
struct RunManifest {
  std::string command;
  nlohmann::json parameters = nlohmann::json::object();
  std::string toolkit_version = phspec::version;
  double wall_time_seconds = 0.0;
  std::vector<std::string> warnings;
  std::vector<std::string> outputs;

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["command"] = command;
    j["parameters"] = parameters;
    j["toolkit_version"] = toolkit_version;
    j["wall_time_seconds"] = wall_time_seconds;
    j["warnings"] = warnings;
    j["outputs"] = outputs;
    return j;
  }

  static RunManifest from_json(const nlohmann::json& j) {
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.parameters = j.at("parameters");
    m.toolkit_version = j.at("toolkit_version").get<std::string>();
    m.wall_time_seconds = j.at("wall_time_seconds").get<double>();
    m.warnings = j.at("warnings").get<std::vector<std::string>>();
    m.outputs = j.at("outputs").get<std::vector<std::string>>();
    return m;
  }

  std::string dump() const { return to_json().dump(2) + "\n"; }

  void write(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path);
    os << dump();
  }
};

}  // namespace phspec::io
