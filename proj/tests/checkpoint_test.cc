#include "plsv/checkpoint.h"

#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "json.hpp"
#include "plsv/synthetic.h"

namespace plsv {
namespace {

namespace fs = std::filesystem;

class CheckpointTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("plsv_ckpt_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  static const SyntheticCorpus& Corpus() {
    static const SyntheticCorpus syn = [] {
      SyntheticOptions o;
      o.topics = 3;
      o.docs = 60;
      o.vocab = 30;
      o.tokens_per_doc = 20;
      return GenerateSynthetic(o);
    }();
    return syn;
  }

  template <typename T>
  TrainedModel<T> Model(bool decoder_bn = false) {
    TrainConfig c;
    c.topics = 3;
    c.hidden1 = c.hidden2 = 8;
    c.batch_size = 16;
    c.epochs = 2;
    c.seed = 77;
    c.decoder_batchnorm = decoder_bn;
    c.precision = sizeof(T) == 8 ? Precision::kF64 : Precision::kF32;
    return Train<T>(Corpus().corpus, c);
  }

  nlohmann::json Manifest() {
    std::ifstream in(dir_ / "manifest.json");
    return nlohmann::json::parse(in);
  }
  void WriteManifest(const nlohmann::json& j) {
    std::ofstream(dir_ / "manifest.json", std::ios::trunc) << j.dump(2);
  }

  fs::path dir_;
};

template <typename T>
void ExpectSameModel(const TrainedModel<T>& a, const TrainedModel<T>& b) {
  std::vector<const Matrix<T>*> ta, tb;
  auto grab = [](auto& out) {
    return [&out](std::string_view, const Matrix<T>& t, bool) { out.push_back(&t); };
  };
  a.encoder.ForEachTensor(grab(ta));
  a.decoder.ForEachTensor(grab(ta));
  b.encoder.ForEachTensor(grab(tb));
  b.decoder.ForEachTensor(grab(tb));
  ASSERT_EQ(ta.size(), tb.size());
  for (size_t i = 0; i < ta.size(); ++i) EXPECT_TRUE(ta[i]->BitwiseEqual(*tb[i])) << i;
  if (a.decoder.use_batchnorm) {
    EXPECT_TRUE(a.decoder.bn.running_mean.BitwiseEqual(b.decoder.bn.running_mean));
  }
  EXPECT_TRUE(a.doc_coords.BitwiseEqual(b.doc_coords));
  EXPECT_EQ(a.config, b.config);
  EXPECT_EQ(a.curve, b.curve);
  EXPECT_EQ(a.decoder.kernel, b.decoder.kernel);
}

TEST_F(CheckpointTest, RoundTripF32) {
  const auto m = Model<float>();
  SaveCheckpoint(m, dir_);
  ExpectSameModel(m, LoadCheckpoint<float>(dir_));
  const auto info = ReadCheckpointInfo(dir_);
  EXPECT_EQ(info.kind, CheckpointKind::kVae);
  EXPECT_EQ(info.precision, Precision::kF32);
  EXPECT_EQ(info.format_version, kCheckpointFormatVersion);
  EXPECT_EQ(info.seed, 77u);
}

TEST_F(CheckpointTest, RoundTripF64WithDecoderBatchNorm) {
  const auto m = Model<double>(true);
  SaveCheckpoint(m, dir_);
  ExpectSameModel(m, LoadCheckpoint<double>(dir_));
}

TEST_F(CheckpointTest, SavingTwiceGivesIdenticalBytes) {
  const auto m = Model<float>();
  SaveCheckpoint(m, dir_ / "a");
  SaveCheckpoint(m, dir_ / "b");
  for (const char* f : {"manifest.json", "params.bin"}) {
    std::ifstream a(dir_ / "a" / f, std::ios::binary), b(dir_ / "b" / f, std::ios::binary);
    const std::string sa((std::istreambuf_iterator<char>(a)), {});
    const std::string sb((std::istreambuf_iterator<char>(b)), {});
    EXPECT_EQ(sa, sb) << f;
  }
}

TEST_F(CheckpointTest, ManifestDescribesBlob) {
  SaveCheckpoint(Model<float>(), dir_);
  const auto j = Manifest();
  EXPECT_EQ(j["magic"], "PLSV-CHECKPOINT");
  EXPECT_EQ(j["byte_order"], "little");
  size_t floats = 0;
  for (const auto& t : j["tensors"]) {
    size_t n = 1;
    for (size_t s : t["shape"]) n *= s;
    floats += n;
  }
  EXPECT_EQ(floats * 4, fs::file_size(dir_ / "params.bin"));
  EXPECT_EQ(j["tensors"][0]["name"], "encoder.w1");
  EXPECT_EQ(j["tensors"].back()["name"], "doc_coords");
}

TEST_F(CheckpointTest, CorruptMagicIsVersionedFormatError) {
  SaveCheckpoint(Model<float>(), dir_);
  auto j = Manifest();
  j["magic"] = "NOT-A-CHECKPOINT";
  WriteManifest(j);
  EXPECT_THROW(LoadCheckpoint<float>(dir_), CheckpointError);
}

TEST_F(CheckpointTest, FutureVersionRejected) {
  SaveCheckpoint(Model<float>(), dir_);
  auto j = Manifest();
  j["format_version"] = kCheckpointFormatVersion + 1;
  WriteManifest(j);
  try {
    LoadCheckpoint<float>(dir_);
    FAIL();
  } catch (const CheckpointError& e) {
    EXPECT_NE(std::string(e.what()).find("version"), std::string::npos);
  }
}

TEST_F(CheckpointTest, PrecisionMismatch) {
  SaveCheckpoint(Model<double>(), dir_);
  try {
    LoadCheckpoint<float>(dir_);
    FAIL();
  } catch (const CheckpointError& e) {
    EXPECT_NE(std::string(e.what()).find("precision"), std::string::npos);
  }
}

TEST_F(CheckpointTest, ShapeMismatch) {
  SaveCheckpoint(Model<float>(), dir_);
  auto j = Manifest();
  j["tensors"][0]["shape"][1] = 9;
  WriteManifest(j);
  EXPECT_THROW(LoadCheckpoint<float>(dir_), CheckpointError);
}

TEST_F(CheckpointTest, TruncatedAndOversizedBlob) {
  SaveCheckpoint(Model<float>(), dir_);
  const auto size = fs::file_size(dir_ / "params.bin");
  fs::resize_file(dir_ / "params.bin", size - 4);
  EXPECT_THROW(LoadCheckpoint<float>(dir_), CheckpointError);
  fs::resize_file(dir_ / "params.bin", size + 4);
  EXPECT_THROW(LoadCheckpoint<float>(dir_), CheckpointError);
  EXPECT_THROW(LoadCheckpoint<float>(dir_ / "missing"), CheckpointError);
}

TEST_F(CheckpointTest, MapRoundTripAndKindCheck) {
  MapConfig config;
  config.topics = 3;
  config.em_iters = 3;
  config.seed = 4;
  const MapModel m = MapTrain(Corpus().corpus.counts, config);
  SaveMapCheckpoint(m, dir_);
  const MapModel back = LoadMapCheckpoint(dir_);
  EXPECT_EQ(back.params, m.params);
  EXPECT_EQ(back.config, m.config);
  EXPECT_EQ(back.objective, m.objective);
  EXPECT_EQ(ReadCheckpointInfo(dir_).kind, CheckpointKind::kMap);
  EXPECT_THROW(LoadCheckpoint<double>(dir_), CheckpointError);
  SaveCheckpoint(Model<double>(), dir_ / "vae");
  EXPECT_THROW(LoadMapCheckpoint(dir_ / "vae"), CheckpointError);
}

}  // namespace
}  // namespace plsv
