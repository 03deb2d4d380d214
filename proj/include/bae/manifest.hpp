#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bae/core.hpp"

namespace bae {

constexpr const char* kToolVersion = "1.0.0";

inline std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  uint64_t h = 14695981039346656037ULL;
  char buf[65536];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0)
    h = fnv1a(buf, size_t(in.gcount()), h);
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(h));
  return std::string("fnv64:") + hex;
}

// Serialized alongside every CLI output so a run can be reproduced.
struct RunManifest {
  std::string command;
  nlohmann::json config;
  uint64_t seed = 0;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  double wall_clock_seconds = 0.0;
  std::string model_tag;  // BAE-cr, BAE-cr/corr, BAE-tr, ... when applicable

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["tool"] = "bae";
    j["version"] = kToolVersion;
    j["command"] = command;
    j["config"] = config;
    j["seed"] = seed;
    nlohmann::json digests = nlohmann::json::object();
    for (const auto& p : inputs) digests[p] = file_digest(p);
    j["inputs"] = digests;
    j["outputs"] = outputs;
    j["wall_clock_seconds"] = wall_clock_seconds;
    if (!model_tag.empty()) j["model_tag"] = model_tag;
    return j;
  }

  void write(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path);
    out << to_json().dump(2) << "\n";
  }
};

}  // namespace bae
