#include "manifest.h"

#include <fstream>
#include <memory>
#include <ostream>

#include <openssl/evp.h>
#include <unistd.h>

#include <json.hpp>

#include "kesm/checkpoint.h"
#include "kesm/errors.h"

namespace kesm::cli {

std::string file_sha256(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for hashing");
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 initialisation failed");
  }
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof(buf));
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest, &len);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xF];
  }
  return out;
}

void write_atomic(const std::filesystem::path& path,
                  const std::function<void(std::ostream&)>& fill) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  try {
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
      fill(out);
      out.flush();
      if (!out) throw IoError("write failure on '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
  } catch (...) {
    std::error_code ignored;
    std::filesystem::remove(tmp, ignored);
    throw;
  }
}

RunManifest::RunManifest(std::string command, std::string config_snapshot, std::uint64_t seed)
    : command_(std::move(command)),
      config_(std::move(config_snapshot)),
      seed_(seed),
      start_(std::chrono::steady_clock::now()) {}

void RunManifest::add_input(const std::string& role, const std::filesystem::path& path) {
  inputs_.push_back({role, {path.string(), file_sha256(path)}});
}

void RunManifest::add_output(const std::filesystem::path& path) { outputs_.push_back(path.string()); }

void RunManifest::set_note(const std::string& key, const std::string& value) {
  notes_.emplace_back(key, value);
}

void RunManifest::write(const std::filesystem::path& path) const {
  nlohmann::ordered_json j;
  j["command"] = command_;
  j["toolkit_version"] = KESM_VERSION;
  j["checkpoint_format_version"] = kCheckpointFormatVersion;
  j["seed"] = seed_;
  j["config"] = config_;
  nlohmann::ordered_json inputs = nlohmann::ordered_json::array();
  for (const auto& [role, file] : inputs_) {
    inputs.push_back({{"role", role}, {"path", file.first}, {"sha256", file.second}});
  }
  j["inputs"] = std::move(inputs);
  j["outputs"] = outputs_;
  for (const auto& [key, value] : notes_) j["notes"][key] = value;
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  j["timings"] = {{"wall_seconds", seconds}};
  write_atomic(path, [&](std::ostream& out) { out << j.dump(2) << '\n'; });
}

std::filesystem::path manifest_path(const std::filesystem::path& artifact) {
  std::filesystem::path p = artifact;
  if (std::filesystem::is_directory(artifact)) return p / "manifest.json";
  p += ".manifest.json";
  return p;
}

}  // namespace kesm::cli
