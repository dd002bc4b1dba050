#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace medex {

inline constexpr const char* kToolName = "medex";
inline constexpr const char* kToolVersion = "0.1.0";

// Stable content digest of a file, or of a directory (sorted file names and
// contents). Used for the reproducibility manifest, not for security.
std::uint64_t path_digest(const std::string& path);

struct Manifest {
  std::string command;
  std::map<std::string, std::string> config;
  std::vector<std::string> inputs;   // paths digested at write time
  std::vector<std::string> outputs;  // files produced under the output dir
};

// Deterministic JSON: tool version, resolved config, config hash, input
// digests. Never includes timestamps, so re-runs are byte-identical.
std::string manifest_to_json(const Manifest& manifest);

void write_manifest(const std::string& out_dir, const Manifest& manifest);

}  // namespace medex
