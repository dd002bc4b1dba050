#include "medex/manifest.hpp"

#include <filesystem>
#include <set>

#include <json.hpp>

#include "medex/util.hpp"

namespace medex {

namespace fs = std::filesystem;

std::uint64_t path_digest(const std::string& path) {
  if (fs::is_directory(path)) {
    std::set<std::string> names;
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.is_regular_file()) names.insert(entry.path().filename().string());
    }
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const std::string& name : names) {
      h = fnv1a(name, h);
      h = fnv1a(read_file((fs::path(path) / name).string()), h);
    }
    return h;
  }
  if (fs::is_regular_file(path)) return fnv1a(read_file(path));
  fail(ErrorKind::Io, "cannot digest missing path: " + path);
}

namespace {

std::string hex64(std::uint64_t value) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[value & 0xF];
    value >>= 4;
  }
  return out;
}

}  // namespace

std::string manifest_to_json(const Manifest& manifest) {
  nlohmann::json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["command"] = manifest.command;
  j["config"] = manifest.config;
  std::string config_blob;
  for (const auto& [key, value] : manifest.config) config_blob += key + "=" + value + "\n";
  j["config_digest"] = hex64(fnv1a(config_blob));
  nlohmann::json inputs = nlohmann::json::object();
  for (const std::string& input : manifest.inputs) inputs[input] = hex64(path_digest(input));
  j["inputs"] = std::move(inputs);
  j["outputs"] = manifest.outputs;
  return j.dump(2) + "\n";
}

void write_manifest(const std::string& out_dir, const Manifest& manifest) {
  fs::create_directories(out_dir);
  write_file((fs::path(out_dir) / "manifest.json").string(), manifest_to_json(manifest));
}

}  // namespace medex
