#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "plsv/config.h"
#include "plsv/map_baseline.h"
#include "plsv/trainer.h"

namespace plsv {

// Raised for malformed, truncated or incompatible checkpoint directories.
class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kCheckpointFormatVersion = 1;

enum class CheckpointKind { kVae, kMap };

struct CheckpointInfo {
  CheckpointKind kind;
  Precision precision;
  int format_version;
  uint64_t seed;
};

// A checkpoint is a directory holding manifest.json and params.bin. The
// manifest lists tensor names and shapes in blob order; the blob holds the
// tensors as little-endian IEEE-754, row-major, concatenated.
CheckpointInfo ReadCheckpointInfo(const std::filesystem::path& dir);

template <typename T>
void SaveCheckpoint(const TrainedModel<T>& model,
                    const std::filesystem::path& dir);

// Throws CheckpointError when the stored precision differs from T.
template <typename T>
TrainedModel<T> LoadCheckpoint(const std::filesystem::path& dir);

void SaveMapCheckpoint(const MapModel& model, const std::filesystem::path& dir);
MapModel LoadMapCheckpoint(const std::filesystem::path& dir);

}  // namespace plsv
