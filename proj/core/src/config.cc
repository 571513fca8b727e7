#include "plsv/config.h"

#include <stdexcept>

#include "json.hpp"

namespace plsv {

std::string_view PrecisionName(Precision p) {
  return p == Precision::kF64 ? "f64" : "f32";
}

Precision ParsePrecision(std::string_view name) {
  if (name == "f32") return Precision::kF32;
  if (name == "f64") return Precision::kF64;
  throw std::invalid_argument("unknown precision '" + std::string(name) +
                              "' (expected f32 or f64)");
}

void TrainConfig::Validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("TrainConfig: ") + what);
  };
  require(topics >= 1, "topics must be >= 1");
  require(dim >= 1, "dim must be >= 1");
  require(gamma > 0, "gamma must be positive");
  require(lr > 0, "lr must be positive");
  require(batch_size >= 2, "batch_size must be >= 2 (batch normalization)");
  require(samples >= 1, "samples must be >= 1");
  require(hidden1 >= 1 && hidden2 >= 1, "hidden sizes must be >= 1");
  const double p = DropProbability();
  require(p >= 0 && p < 1, "drop probability must be in [0, 1)");
  require(clip_norm > 0, "clip_norm must be positive");
  require(bn_momentum >= 0 && bn_momentum < 1, "bn_momentum must be in [0, 1)");
  require(bn_eps >= 0, "bn_eps must be non-negative");
  require(threads >= 1, "threads must be >= 1");
  require(!(decoder_batchnorm && topics < 2),
          "decoder batchnorm needs at least 2 topics");
}

std::string TrainConfigToJson(const TrainConfig& c) {
  nlohmann::ordered_json j;
  j["topics"] = c.topics;
  j["dim"] = c.dim;
  j["gamma"] = c.gamma;
  j["lr"] = c.lr;
  j["batch_size"] = c.batch_size;
  j["epochs"] = c.epochs;
  j["samples"] = c.samples;
  j["dropout"] = c.dropout;
  j["dropout_is_keep"] = c.dropout_is_keep;
  j["hidden1"] = c.hidden1;
  j["hidden2"] = c.hidden2;
  j["kernel"] = std::string(KernelName(c.kernel));
  j["seed"] = c.seed;
  j["precision"] = std::string(PrecisionName(c.precision));
  j["deterministic"] = c.deterministic;
  j["phi_l2"] = c.phi_l2;
  j["decoder_batchnorm"] = c.decoder_batchnorm;
  j["clip_norm"] = c.clip_norm;
  j["bn_momentum"] = c.bn_momentum;
  j["bn_eps"] = c.bn_eps;
  j["threads"] = c.threads;
  return j.dump(2);
}

TrainConfig TrainConfigFromJson(std::string_view text,
                                const TrainConfig& defaults) {
  const auto j = nlohmann::json::parse(text);
  if (!j.is_object())
    throw std::invalid_argument("train config: expected a JSON object");
  TrainConfig c = defaults;
  for (const auto& [key, value] : j.items()) {
    if (key == "topics") c.topics = value.get<size_t>();
    else if (key == "dim") c.dim = value.get<size_t>();
    else if (key == "gamma") c.gamma = value.get<double>();
    else if (key == "lr") c.lr = value.get<double>();
    else if (key == "batch_size") c.batch_size = value.get<size_t>();
    else if (key == "epochs") c.epochs = value.get<size_t>();
    else if (key == "samples") c.samples = value.get<size_t>();
    else if (key == "dropout") c.dropout = value.get<double>();
    else if (key == "dropout_is_keep") c.dropout_is_keep = value.get<bool>();
    else if (key == "hidden1") c.hidden1 = value.get<size_t>();
    else if (key == "hidden2") c.hidden2 = value.get<size_t>();
    else if (key == "kernel") c.kernel = ParseKernel(value.get<std::string>());
    else if (key == "seed") c.seed = value.get<uint64_t>();
    else if (key == "precision") c.precision = ParsePrecision(value.get<std::string>());
    else if (key == "deterministic") c.deterministic = value.get<bool>();
    else if (key == "phi_l2") c.phi_l2 = value.get<bool>();
    else if (key == "decoder_batchnorm") c.decoder_batchnorm = value.get<bool>();
    else if (key == "clip_norm") c.clip_norm = value.get<double>();
    else if (key == "bn_momentum") c.bn_momentum = value.get<double>();
    else if (key == "bn_eps") c.bn_eps = value.get<double>();
    else if (key == "threads") c.threads = value.get<int>();
    else throw std::invalid_argument("train config: unknown key '" + key + "'");
  }
  return c;
}

}  // namespace plsv
