// Copyright 2026 The eqpt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Run manifests: everything needed to repeat a CLI invocation, written next to its outputs.

#pragma once

#include <chrono>
#include <ctime>
#include <fstream>
#include <string>

#include <json.hpp>

#include "eqpt/io.hpp"

namespace eqpt {

inline constexpr std::string_view kVersion = "1.0.0";

struct RunManifest {
  std::string command;
  nlohmann::json config;
  std::string version{kVersion};
  std::uint64_t base_seed = 0;
  std::string timestamp;  ///< UTC, ISO 8601
};

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline nlohmann::json to_json(const SweepConfig& config) {
  nlohmann::json j;
  j["methods"] = nlohmann::json::array();
  for (Method m : config.methods) j["methods"].push_back(std::string(to_string(m)));
  j["qubits"] = config.qubits;
  j["widths"] = config.widths;
  j["trials"] = config.trials;
  j["seed"] = config.base_seed;
  j["jobs"] = config.jobs;
  j["timing"] = config.timing;
  return j;
}

inline nlohmann::json to_json(const Diagnostics& diag) {
  nlohmann::json j;
  j["unitarity_defect"] = diag.unitarity_defect;
  j["seconds"] = diag.seconds;
  j["rank_deficient_projection"] = diag.rank_deficient_projection;
  j["non_hermitian_fallback"] = diag.non_hermitian_fallback;
  j["stages"] = nlohmann::json::array();
  for (const auto& s : diag.stages)
    j["stages"].push_back({{"name", s.name},
                           {"min_gap", s.min_gap},
                           {"seconds", s.seconds},
                           {"reorthonormalized_blocks", s.reorthonormalized_blocks}});
  return j;
}

inline nlohmann::json to_json(const RunManifest& m) {
  return {{"command", m.command},
          {"config", m.config},
          {"version", m.version},
          {"base_seed", m.base_seed},
          {"timestamp", m.timestamp}};
}

inline void save_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << j.dump(2) << '\n';
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace eqpt
