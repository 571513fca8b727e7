#include "run_manifest.h"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <ctime>
#include <fstream>
#include <memory>
#include <stdexcept>

#include "json.hpp"

namespace plsv::cli {

namespace fs = std::filesystem;

namespace {

std::string TimeString(const char* format) {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[64];
  std::strftime(buf, sizeof(buf), format, &tm);
  return buf;
}

}  // namespace

std::string Sha256File(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path.string() + "'");
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                              EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 initialisation failed");
  std::array<char, 1 << 16> buf;
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0)
      EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md, &len);
  static const char* kHex = "0123456789abcdef";
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex += kHex[md[i] >> 4];
    hex += kHex[md[i] & 15];
  }
  return hex;
}

RunManifest::RunManifest(std::string command, std::vector<std::string> argv)
    : command_(std::move(command)),
      argv_(std::move(argv)),
      started_(TimeString("%Y-%m-%dT%H:%M:%SZ")),
      start_(std::chrono::steady_clock::now()) {}

void RunManifest::Hash(const fs::path& path, std::vector<Entry>& out) {
  if (fs::is_directory(path)) {
    std::vector<fs::path> files;
    for (const auto& e : fs::recursive_directory_iterator(path))
      if (e.is_regular_file()) files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) out.push_back({f.string(), Sha256File(f)});
  } else {
    out.push_back({path.string(), Sha256File(path)});
  }
}

void RunManifest::AddInput(const fs::path& path) { Hash(path, inputs_); }
void RunManifest::AddOutput(const fs::path& path) { Hash(path, outputs_); }

void RunManifest::Write(const fs::path& path) const {
  nlohmann::ordered_json j;
  j["command"] = command_;
  j["argv"] = argv_;
  j["version"] = PLSV_VERSION;
  j["started_utc"] = started_;
  j["wall_seconds"] = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start_)
                          .count();
  if (has_seed_) j["seed"] = seed_;
  j["config"] = config_json_.empty() ? nlohmann::ordered_json::object()
                                     : nlohmann::ordered_json::parse(config_json_);
  auto entries = [](const std::vector<Entry>& v) {
    nlohmann::ordered_json a = nlohmann::ordered_json::array();
    for (const auto& e : v) a.push_back({{"path", e.path}, {"sha256", e.sha256}});
    return a;
  };
  j["inputs"] = entries(inputs_);
  j["outputs"] = entries(outputs_);
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

fs::path DefaultRunDir(const std::string& command, const uint64_t* seed) {
  std::string name = TimeString("%Y%m%d-%H%M%S") + "-" + command;
  if (seed != nullptr) name += "-seed" + std::to_string(*seed);
  return fs::path("runs") / name;
}

}  // namespace plsv::cli
