#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

namespace plsv::cli {

// Hex SHA-256 of a file's bytes.
std::string Sha256File(const std::filesystem::path& path);

// Record of one command invocation, written as JSON.
class RunManifest {
 public:
  RunManifest(std::string command, std::vector<std::string> argv);

  void SetConfig(std::string config_json) { config_json_ = std::move(config_json); }
  void SetSeed(uint64_t seed) { seed_ = seed; has_seed_ = true; }
  // Files are hashed when added; directories hash every regular file inside.
  void AddInput(const std::filesystem::path& path);
  void AddOutput(const std::filesystem::path& path);

  void Write(const std::filesystem::path& path) const;

 private:
  struct Entry {
    std::string path;
    std::string sha256;
  };
  static void Hash(const std::filesystem::path& path, std::vector<Entry>& out);

  std::string command_;
  std::vector<std::string> argv_;
  std::string config_json_;
  uint64_t seed_ = 0;
  bool has_seed_ = false;
  std::vector<Entry> inputs_, outputs_;
  std::string started_;
  std::chrono::steady_clock::time_point start_;
};

// "runs/<YYYYmmdd-HHMMSS>[-seed<seed>]" under the current directory.
std::filesystem::path DefaultRunDir(const std::string& command,
                                    const uint64_t* seed);

}  // namespace plsv::cli
