#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace kesm::cli {

// Hex SHA-256 of a file's bytes.
std::string file_sha256(const std::filesystem::path& path);

// Writes through a sibling temporary file and renames it into place, so a
// failed command never leaves a partial output behind.
void write_atomic(const std::filesystem::path& path, const std::function<void(std::ostream&)>& fill);

// Provenance record written next to every artifact as `<artifact>.manifest.json`.
class RunManifest {
 public:
  RunManifest(std::string command, std::string config_snapshot, std::uint64_t seed);

  void add_input(const std::string& role, const std::filesystem::path& path);
  void add_output(const std::filesystem::path& path);
  void set_note(const std::string& key, const std::string& value);
  void write(const std::filesystem::path& path) const;

 private:
  std::string command_;
  std::string config_;
  std::uint64_t seed_;
  std::vector<std::pair<std::string, std::pair<std::string, std::string>>> inputs_;
  std::vector<std::string> outputs_;
  std::vector<std::pair<std::string, std::string>> notes_;
  std::chrono::steady_clock::time_point start_;
};

std::filesystem::path manifest_path(const std::filesystem::path& artifact);

}  // namespace kesm::cli
