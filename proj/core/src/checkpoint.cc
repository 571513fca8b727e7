#include "plsv/checkpoint.h"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "json.hpp"

namespace plsv {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

constexpr const char* kMagic = "PLSV-CHECKPOINT";
constexpr const char* kManifestName = "manifest.json";
constexpr const char* kBlobName = "params.bin";

std::string_view KindName(CheckpointKind kind) {
  return kind == CheckpointKind::kMap ? "map" : "vae";
}

template <typename T>
constexpr Precision PrecisionOf() {
  return sizeof(T) == 8 ? Precision::kF64 : Precision::kF32;
}

template <typename T>
struct TensorRef {
  std::string name;
  Matrix<T>* tensor;
};

template <typename T>
void AppendLittleEndian(const Matrix<T>& m, std::string& out) {
  const size_t offset = out.size();
  out.resize(offset + m.size() * sizeof(T));
  std::memcpy(out.data() + offset, m.values().data(), m.size() * sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    for (size_t i = offset; i < out.size(); i += sizeof(T))
      std::reverse(out.begin() + i, out.begin() + i + sizeof(T));
  }
}

template <typename T>
void ReadLittleEndian(const std::string& blob, size_t offset, Matrix<T>& m) {
  std::string bytes = blob.substr(offset, m.size() * sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    for (size_t i = 0; i < bytes.size(); i += sizeof(T))
      std::reverse(bytes.begin() + i, bytes.begin() + i + sizeof(T));
  }
  std::memcpy(m.values().data(), bytes.data(), bytes.size());
}

void WriteFile(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CheckpointError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw CheckpointError("failed writing " + path.string());
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <typename T>
void WriteCheckpoint(const fs::path& dir, Json manifest,
                     const std::vector<TensorRef<T>>& tensors) {
  std::string blob;
  Json list = Json::array();
  for (const auto& t : tensors) {
    list.push_back({{"name", t.name},
                    {"shape", {t.tensor->rows(), t.tensor->cols()}}});
    AppendLittleEndian(*t.tensor, blob);
  }
  manifest["tensors"] = std::move(list);
  manifest["params_bytes"] = blob.size();
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw CheckpointError("cannot create " + dir.string() + ": " + ec.message());
  WriteFile(dir / kBlobName, blob);
  WriteFile(dir / kManifestName, manifest.dump(2) + "\n");
}

Json ReadManifest(const fs::path& dir) {
  const fs::path path = dir / kManifestName;
  Json m;
  try {
    m = Json::parse(ReadFile(path));
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError(path.string() + ": malformed manifest: " + e.what());
  }
  if (!m.is_object() || !m.contains("magic") || !m["magic"].is_string() ||
      m["magic"].get<std::string>() != kMagic)
    throw CheckpointError(path.string() +
                          ": not a plsv checkpoint (bad magic); expected format "
                          "version " + std::to_string(kCheckpointFormatVersion));
  const int version = m.value("format_version", -1);
  if (version != kCheckpointFormatVersion)
    throw CheckpointError(path.string() + ": unsupported checkpoint format version " +
                          std::to_string(version) + " (expected " +
                          std::to_string(kCheckpointFormatVersion) + ")");
  for (const char* key : {"kind", "precision", "config", "tensors", "params_bytes"})
    if (!m.contains(key))
      throw CheckpointError(path.string() + ": manifest is missing '" + key + "'");
  return m;
}

CheckpointInfo InfoFromManifest(const Json& m, const fs::path& dir) {
  CheckpointInfo info{};
  const std::string kind = m["kind"].get<std::string>();
  if (kind == "vae") info.kind = CheckpointKind::kVae;
  else if (kind == "map") info.kind = CheckpointKind::kMap;
  else throw CheckpointError(dir.string() + ": unknown checkpoint kind '" + kind + "'");
  try {
    info.precision = ParsePrecision(m["precision"].get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw CheckpointError(dir.string() + ": " + e.what());
  }
  info.format_version = m["format_version"].get<int>();
  info.seed = m.value("seed", uint64_t{0});
  return info;
}

// Fills the skeleton tensors from the blob, checking names and shapes
// against the manifest.
template <typename T>
void ReadTensors(const fs::path& dir, const Json& manifest,
                 const std::vector<TensorRef<T>>& tensors) {
  const Json& list = manifest["tensors"];
  if (!list.is_array() || list.size() != tensors.size())
    throw CheckpointError(dir.string() + ": manifest lists " +
                          std::to_string(list.is_array() ? list.size() : 0) +
                          " tensors, expected " + std::to_string(tensors.size()));
  size_t expected_bytes = 0;
  for (size_t i = 0; i < tensors.size(); ++i) {
    const auto& entry = list[i];
    const std::string name = entry.value("name", std::string());
    const auto& t = tensors[i];
    if (name != t.name)
      throw CheckpointError(dir.string() + ": tensor " + std::to_string(i) +
                            " is '" + name + "', expected '" + t.name + "'");
    const auto shape = entry.value("shape", std::vector<size_t>());
    if (shape.size() != 2 || shape[0] != t.tensor->rows() ||
        shape[1] != t.tensor->cols())
      throw CheckpointError(dir.string() + ": shape mismatch for '" + name +
                            "': manifest " + entry["shape"].dump() +
                            ", model expects " + t.tensor->ShapeString());
    expected_bytes += t.tensor->size() * sizeof(T);
  }
  if (manifest["params_bytes"].get<size_t>() != expected_bytes)
    throw CheckpointError(dir.string() + ": manifest params_bytes does not match tensor shapes");
  const std::string blob = ReadFile(dir / kBlobName);
  if (blob.size() < expected_bytes)
    throw CheckpointError(dir.string() + ": truncated params.bin (" +
                          std::to_string(blob.size()) + " of " +
                          std::to_string(expected_bytes) + " bytes)");
  if (blob.size() > expected_bytes)
    throw CheckpointError(dir.string() + ": params.bin has " +
                          std::to_string(blob.size() - expected_bytes) +
                          " trailing bytes");
  size_t offset = 0;
  for (const auto& t : tensors) {
    ReadLittleEndian(blob, offset, *t.tensor);
    offset += t.tensor->size() * sizeof(T);
  }
}

const Json& FindTensor(const Json& manifest, std::string_view name,
                       const fs::path& dir) {
  for (const auto& entry : manifest["tensors"])
    if (entry.value("name", std::string()) == name) return entry;
  throw CheckpointError(dir.string() + ": manifest has no tensor '" +
                        std::string(name) + "'");
}

size_t ShapeDim(const Json& entry, size_t axis, const fs::path& dir) {
  const auto shape = entry.value("shape", std::vector<size_t>());
  if (shape.size() != 2)
    throw CheckpointError(dir.string() + ": malformed shape for '" +
                          entry.value("name", std::string()) + "'");
  return shape[axis];
}

}  // namespace

CheckpointInfo ReadCheckpointInfo(const fs::path& dir) {
  return InfoFromManifest(ReadManifest(dir), dir);
}

template <typename T>
void SaveCheckpoint(const TrainedModel<T>& model, const fs::path& dir) {
  Json m;
  m["magic"] = kMagic;
  m["format_version"] = kCheckpointFormatVersion;
  m["kind"] = KindName(CheckpointKind::kVae);
  m["precision"] = std::string(PrecisionName(PrecisionOf<T>()));
  m["byte_order"] = "little";
  m["seed"] = model.config.seed;
  m["config"] = Json::parse(TrainConfigToJson(model.config));
  Json curve = Json::array();
  for (const auto& s : model.curve) curve.push_back({s.elbo, s.kl, s.recon});
  m["curve"] = std::move(curve);

  auto& mutable_model = const_cast<TrainedModel<T>&>(model);
  std::vector<TensorRef<T>> tensors;
  auto collect = [&](std::string_view name, Matrix<T>& t, bool) {
    tensors.push_back({std::string(name), &t});
  };
  mutable_model.encoder.ForEachTensor(collect);
  mutable_model.decoder.ForEachTensor(collect);
  tensors.push_back({"doc_coords", &mutable_model.doc_coords});
  WriteCheckpoint(dir, std::move(m), tensors);
}

template <typename T>
TrainedModel<T> LoadCheckpoint(const fs::path& dir) {
  const Json m = ReadManifest(dir);
  const CheckpointInfo info = InfoFromManifest(m, dir);
  if (info.kind != CheckpointKind::kVae)
    throw CheckpointError(dir.string() + ": expected a VAE checkpoint, found '" +
                          std::string(KindName(info.kind)) + "'");
  if (info.precision != PrecisionOf<T>())
    throw CheckpointError(dir.string() + ": precision mismatch: checkpoint is " +
                          std::string(PrecisionName(info.precision)) +
                          " but " + std::string(PrecisionName(PrecisionOf<T>())) +
                          " was requested");
  TrainedModel<T> model;
  try {
    model.config = TrainConfigFromJson(m["config"].dump());
  } catch (const std::exception& e) {
    throw CheckpointError(dir.string() + ": bad config: " + e.what());
  }
  const TrainConfig& c = model.config;
  const size_t vocab = ShapeDim(FindTensor(m, "encoder.w1", dir), 0, dir);
  const size_t n_docs = ShapeDim(FindTensor(m, "doc_coords", dir), 0, dir);

  model.encoder = EncoderParams<T>::Zeros(vocab, c.hidden1, c.hidden2, c.dim);
  for (auto* bn : {&model.encoder.bn_mu, &model.encoder.bn_lv}) {
    bn->momentum = c.bn_momentum;
    bn->eps = c.bn_eps;
  }
  auto& dec = model.decoder;
  dec.kernel = c.kernel;
  dec.phi = Matrix<T>(c.topics, c.dim);
  dec.w = Matrix<T>(c.topics, vocab);
  dec.use_batchnorm = c.decoder_batchnorm;
  if (dec.use_batchnorm) dec.bn = BatchNorm<T>(vocab, c.bn_momentum, c.bn_eps);
  model.doc_coords = Matrix<T>(n_docs, c.dim);

  std::vector<TensorRef<T>> tensors;
  auto collect = [&](std::string_view name, Matrix<T>& t, bool) {
    tensors.push_back({std::string(name), &t});
  };
  model.encoder.ForEachTensor(collect);
  model.decoder.ForEachTensor(collect);
  tensors.push_back({"doc_coords", &model.doc_coords});
  ReadTensors(dir, m, tensors);

  if (m.contains("curve")) {
    for (const auto& row : m["curve"]) {
      if (!row.is_array() || row.size() != 3)
        throw CheckpointError(dir.string() + ": malformed training curve");
      model.curve.push_back(
          {row[0].get<double>(), row[1].get<double>(), row[2].get<double>()});
    }
  }
  return model;
}

void SaveMapCheckpoint(const MapModel& model, const fs::path& dir) {
  Json m;
  m["magic"] = kMagic;
  m["format_version"] = kCheckpointFormatVersion;
  m["kind"] = KindName(CheckpointKind::kMap);
  m["precision"] = std::string(PrecisionName(Precision::kF64));
  m["byte_order"] = "little";
  m["seed"] = model.config.seed;
  m["config"] = Json::parse(MapConfigToJson(model.config));
  m["objective"] = model.objective;
  auto& p = const_cast<MapParams&>(model.params);
  WriteCheckpoint<double>(
      dir, std::move(m), {{"map.x", &p.x}, {"map.phi", &p.phi}, {"map.beta", &p.beta}});
}

MapModel LoadMapCheckpoint(const fs::path& dir) {
  const Json m = ReadManifest(dir);
  const CheckpointInfo info = InfoFromManifest(m, dir);
  if (info.kind != CheckpointKind::kMap)
    throw CheckpointError(dir.string() + ": expected a MAP checkpoint, found '" +
                          std::string(KindName(info.kind)) + "'");
  if (info.precision != Precision::kF64)
    throw CheckpointError(dir.string() + ": precision mismatch: MAP checkpoints are f64");
  MapModel model;
  try {
    model.config = MapConfigFromJson(m["config"].dump());
  } catch (const std::exception& e) {
    throw CheckpointError(dir.string() + ": bad config: " + e.what());
  }
  const size_t n_docs = ShapeDim(FindTensor(m, "map.x", dir), 0, dir);
  const size_t vocab = ShapeDim(FindTensor(m, "map.beta", dir), 1, dir);
  const auto& c = model.config;
  model.params = MapParams{Matrix<double>(n_docs, c.dim),
                           Matrix<double>(c.topics, c.dim),
                           Matrix<double>(c.topics, vocab)};
  auto& p = model.params;
  ReadTensors<double>(dir, m,
                      {{"map.x", &p.x}, {"map.phi", &p.phi}, {"map.beta", &p.beta}});
  if (m.contains("objective"))
    model.objective = m["objective"].get<std::vector<double>>();
  return model;
}

template void SaveCheckpoint(const TrainedModel<float>&, const fs::path&);
template void SaveCheckpoint(const TrainedModel<double>&, const fs::path&);
template TrainedModel<float> LoadCheckpoint(const fs::path&);
template TrainedModel<double> LoadCheckpoint(const fs::path&);

}  // namespace plsv
