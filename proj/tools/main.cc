// plsv: preprocess corpora, train PLSV models (variational or MAP-EM),
// evaluate them and plot the visualization space.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "plsv/checkpoint.h"
#include "plsv/config.h"
#include "plsv/corpus.h"
#include "plsv/decoder.h"
#include "plsv/eval.h"
#include "plsv/map_baseline.h"
#include "plsv/synthetic.h"
#include "plsv/trainer.h"
#include "plsv/viz.h"
#include "run_manifest.h"

namespace fs = std::filesystem;

namespace plsv::cli {
namespace {

// Exit statuses.
constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::string> g_argv;

struct Common {
  std::string out;
  std::string config_path;
  int threads = 0;
  bool fast = false;
};

int ResolveThreads(int flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("PLSV_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
    spdlog::warn("ignoring PLSV_THREADS='{}'", env);
  }
  return 1;
}

std::string ReadText(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

fs::path PrepareDir(const std::string& out, const std::string& command,
                    const uint64_t* seed) {
  fs::path dir = out.empty() ? DefaultRunDir(command, seed) : fs::path(out);
  fs::create_directories(dir);
  return dir;
}

// Output file given by --out, or <run dir>/<default_name>.
fs::path PrepareFile(const std::string& out, const std::string& command,
                     const std::string& default_name) {
  if (!out.empty()) {
    const fs::path p(out);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    return p;
  }
  return PrepareDir("", command, nullptr) / default_name;
}

fs::path ManifestPathFor(const fs::path& file) {
  fs::path p = file;
  p.replace_extension(".run.json");
  return p;
}

fs::path Sibling(const fs::path& bow, const std::string& ext) {
  fs::path p = bow;
  p.replace_extension(ext);
  return p;
}

void RequireFile(const fs::path& p, const char* what) {
  if (!fs::exists(p))
    throw std::runtime_error(std::string(what) + " '" + p.string() + "' does not exist");
}

// ---- preprocess ----

struct PreprocessArgs {
  std::string corpus;
  size_t vocab_size = 2000;
  std::string stoplist;
  Common common;
};

int Preprocess(const PreprocessArgs& a) {
  RunManifest manifest("preprocess", g_argv);
  RequireFile(a.corpus, "corpus");
  const auto raw = ReadCorpusFile(a.corpus);
  manifest.AddInput(a.corpus);
  StopList custom;
  if (!a.stoplist.empty()) {
    custom = ReadStopList(a.stoplist);
    manifest.AddInput(a.stoplist);
  }
  const StopList& stop = a.stoplist.empty() ? DefaultStopList() : custom;
  std::vector<TokenList> tokens;
  std::vector<std::string> labels;
  for (const auto& d : raw) {
    tokens.push_back(PreprocessText(d.text, stop));
    labels.push_back(d.label);
  }
  const Vocabulary vocab = BuildVocab(tokens, a.vocab_size);
  const BowCorpus corpus = VectorizeTokens(tokens, labels, vocab);
  if (vocab.size() < a.vocab_size)
    spdlog::warn("only {} distinct words after preprocessing (requested {})",
                 vocab.size(), a.vocab_size);

  const fs::path dir = PrepareDir(a.common.out, "preprocess", nullptr);
  const fs::path bow = dir / "corpus.bow", voc = dir / "corpus.vocab",
                 tok = dir / "corpus.tokens";
  WriteBowCache(corpus, bow);
  WriteVocabulary(vocab, voc);
  WriteTokenLists(tokens, tok);
  nlohmann::ordered_json cfg;
  cfg["vocab_size"] = a.vocab_size;
  cfg["stoplist"] = a.stoplist.empty() ? "default" : a.stoplist;
  manifest.SetConfig(cfg.dump());
  for (const auto& p : {bow, voc, tok}) manifest.AddOutput(p);
  manifest.Write(dir / "run.json");
  std::cout << "documents: " << corpus.num_docs() << " (" << raw.size() - corpus.num_docs()
            << " empty dropped)\nvocabulary: " << corpus.vocab_size()
            << "\noutput: " << dir.string() << "\n";
  return kOk;
}

// ---- train ----

struct TrainArgs {
  std::string bow;
  TrainConfig flags;  // values bound to command-line options
  std::string kernel = "gaussian";
  std::string precision = "f32";
  CLI::App* app = nullptr;
  Common common;
};

bool Given(CLI::App* app, const std::string& name) {
  return app->count(name) > 0;
}

TrainConfig ResolveTrainConfig(const TrainArgs& a) {
  TrainConfig c;
  if (!a.common.config_path.empty())
    c = TrainConfigFromJson(ReadText(a.common.config_path), c);
  const TrainConfig& f = a.flags;
  CLI::App* app = a.app;
  if (Given(app, "--topics")) c.topics = f.topics;
  if (Given(app, "--dim")) c.dim = f.dim;
  if (Given(app, "--gamma")) c.gamma = f.gamma;
  if (Given(app, "--lr")) c.lr = f.lr;
  if (Given(app, "--batch-size")) c.batch_size = f.batch_size;
  if (Given(app, "--epochs")) c.epochs = f.epochs;
  if (Given(app, "--samples")) c.samples = f.samples;
  if (Given(app, "--dropout")) c.dropout = f.dropout;
  if (Given(app, "--dropout-is-keep")) c.dropout_is_keep = f.dropout_is_keep;
  if (Given(app, "--hidden1")) c.hidden1 = f.hidden1;
  if (Given(app, "--hidden2")) c.hidden2 = f.hidden2;
  if (Given(app, "--kernel")) c.kernel = ParseKernel(a.kernel);
  if (Given(app, "--seed")) c.seed = f.seed;
  if (Given(app, "--precision")) c.precision = ParsePrecision(a.precision);
  if (Given(app, "--phi-l2")) c.phi_l2 = f.phi_l2;
  if (Given(app, "--decoder-batchnorm")) c.decoder_batchnorm = f.decoder_batchnorm;
  if (Given(app, "--clip-norm")) c.clip_norm = f.clip_norm;
  if (a.common.fast) c.deterministic = false;
  if (a.common.threads > 0 || std::getenv("PLSV_THREADS"))
    c.threads = ResolveThreads(a.common.threads);
  c.Validate();
  return c;
}

template <typename T>
void RunTrain(const BowCorpus& corpus, const TrainConfig& config,
              const fs::path& dir, RunManifest& manifest) {
  const fs::path log_path = dir / "train_log.csv";
  std::ofstream log(log_path, std::ios::trunc);
  if (!log) throw std::runtime_error("cannot write '" + log_path.string() + "'");
  log << "epoch,elbo,kl,recon,seconds\n";
  log.precision(10);
  const auto model = Train<T>(corpus, config, [&](const EpochReport<T>& r) {
    log << r.epoch << ',' << r.stats.elbo << ',' << r.stats.kl << ','
        << r.stats.recon << ',' << r.seconds << '\n';
    if ((r.epoch + 1) % 10 == 0 || r.epoch + 1 == config.epochs)
      spdlog::info("epoch {:>5}  elbo {:.4f}  kl {:.4f}  recon {:.4f}",
                   r.epoch + 1, r.stats.elbo, r.stats.kl, r.stats.recon);
  });
  log.close();
  const fs::path ckpt = dir / "checkpoint";
  SaveCheckpoint(model, ckpt);
  manifest.AddOutput(ckpt);
  manifest.AddOutput(log_path);
}

int TrainCmd(const TrainArgs& a) {
  RunManifest manifest("train", g_argv);
  const TrainConfig config = ResolveTrainConfig(a);
  RequireFile(a.bow, "bag-of-words file");
  const BowCorpus corpus = ReadBowCache(a.bow);
  manifest.AddInput(a.bow);
  if (!a.common.config_path.empty()) manifest.AddInput(a.common.config_path);
  if (!config.deterministic)
    spdlog::info("fast mode requested; reductions are order-fixed regardless");
  const fs::path dir = PrepareDir(a.common.out, "train", &config.seed);
  spdlog::info("training on {} documents, V={}, Z={}, {} epochs", corpus.num_docs(),
               corpus.vocab_size(), config.topics, config.epochs);
  if (config.precision == Precision::kF64) {
    RunTrain<double>(corpus, config, dir, manifest);
  } else {
    RunTrain<float>(corpus, config, dir, manifest);
  }
  manifest.SetConfig(TrainConfigToJson(config));
  manifest.SetSeed(config.seed);
  manifest.Write(dir / "run.json");
  std::cout << "checkpoint: " << (dir / "checkpoint").string() << "\n";
  return kOk;
}

// ---- train-map ----

struct TrainMapArgs {
  std::string bow;
  MapConfig flags;
  bool resume = false;
  CLI::App* app = nullptr;
  Common common;
};

int TrainMapCmd(const TrainMapArgs& a) {
  if (a.resume)
    throw UsageError("train-map does not support --resume; start a new run instead");
  RunManifest manifest("train-map", g_argv);
  MapConfig c;
  if (!a.common.config_path.empty())
    c = MapConfigFromJson(ReadText(a.common.config_path), c);
  const MapConfig& f = a.flags;
  CLI::App* app = a.app;
  if (Given(app, "--topics")) c.topics = f.topics;
  if (Given(app, "--dim")) c.dim = f.dim;
  if (Given(app, "--em-iters")) c.em_iters = f.em_iters;
  if (Given(app, "--inner-iters")) c.inner_iters = f.inner_iters;
  if (Given(app, "--lambda")) c.lambda = f.lambda;
  if (Given(app, "--gamma")) c.gamma = f.gamma;
  if (Given(app, "--varphi")) c.varphi = f.varphi;
  if (Given(app, "--inner-lr")) c.inner_lr = f.inner_lr;
  if (Given(app, "--seed")) c.seed = f.seed;
  if (a.common.threads > 0 || std::getenv("PLSV_THREADS"))
    c.threads = ResolveThreads(a.common.threads);
  c.Validate();

  RequireFile(a.bow, "bag-of-words file");
  const BowCorpus corpus = ReadBowCache(a.bow);
  manifest.AddInput(a.bow);
  const fs::path dir = PrepareDir(a.common.out, "train-map", &c.seed);
  const fs::path log_path = dir / "train_log.csv";
  std::ofstream log(log_path, std::ios::trunc);
  if (!log) throw std::runtime_error("cannot write '" + log_path.string() + "'");
  log << "iteration,objective,seconds\n";
  log.precision(12);
  const MapModel model = MapTrain(corpus.counts, c, [&](const MapIterationReport& r) {
    log << r.iteration << ',' << r.objective << ',' << r.seconds << '\n';
    if ((r.iteration + 1) % 10 == 0 || r.iteration + 1 == c.em_iters)
      spdlog::info("EM iteration {:>4}  objective {:.4f}", r.iteration + 1, r.objective);
  });
  log.close();
  SaveMapCheckpoint(model, dir / "checkpoint");
  manifest.SetConfig(MapConfigToJson(c));
  manifest.SetSeed(c.seed);
  manifest.AddOutput(dir / "checkpoint");
  manifest.AddOutput(log_path);
  manifest.Write(dir / "run.json");
  std::cout << "checkpoint: " << (dir / "checkpoint").string() << "\n";
  return kOk;
}

// ---- shared by eval and plot ----

struct LoadedModel {
  Matrix<double> coords;
  Matrix<double> topic_coords;
  Matrix<double> beta;
  uint64_t seed = 0;
};

template <typename T>
LoadedModel FromVae(const fs::path& ckpt, const BowCorpus& corpus) {
  const auto model = LoadCheckpoint<T>(ckpt);
  if (model.encoder.vocab_size() != corpus.vocab_size())
    throw std::runtime_error("checkpoint vocabulary (" +
                             std::to_string(model.encoder.vocab_size()) +
                             ") does not match the corpus (" +
                             std::to_string(corpus.vocab_size()) + ")");
  return LoadedModel{Cast<double>(InferCoords(model, corpus.counts)),
                     Cast<double>(model.decoder.phi),
                     Cast<double>(Beta(model.decoder)), model.config.seed};
}

LoadedModel LoadModel(fs::path ckpt, const BowCorpus& corpus) {
  if (!fs::exists(ckpt / "manifest.json") && fs::exists(ckpt / "checkpoint" / "manifest.json"))
    ckpt /= "checkpoint";
  if (!fs::exists(ckpt / "manifest.json"))
    throw std::runtime_error("checkpoint '" + ckpt.string() + "' not found");
  const CheckpointInfo info = ReadCheckpointInfo(ckpt);
  if (info.kind == CheckpointKind::kMap) {
    MapModel m = LoadMapCheckpoint(ckpt);
    if (m.params.x.rows() != corpus.num_docs() ||
        m.params.beta.cols() != corpus.vocab_size())
      throw std::runtime_error(
          "MAP checkpoint was fitted to a different corpus (coordinates exist "
          "only for its training documents)");
    return LoadedModel{std::move(m.params.x), std::move(m.params.phi),
                       std::move(m.params.beta), m.config.seed};
  }
  if (info.precision == Precision::kF64) return FromVae<double>(ckpt, corpus);
  return FromVae<float>(ckpt, corpus);
}

Vocabulary LoadVocab(const std::string& flag, const fs::path& bow) {
  const fs::path p = flag.empty() ? Sibling(bow, ".vocab") : fs::path(flag);
  RequireFile(p, "vocabulary");
  return ReadVocabulary(p);
}

// ---- eval ----

struct EvalArgs {
  std::string checkpoint;
  std::string bow;
  std::vector<size_t> ks = {1, 5, 10, 20};
  std::string npmi_ref;
  std::string stoplist;
  std::string vocab;
  size_t window = 7;
  size_t top_words = 10;
  Common common;
};

int EvalCmd(const EvalArgs& a) {
  RunManifest manifest("eval", g_argv);
  RequireFile(a.bow, "bag-of-words file");
  const Vocabulary vocab = LoadVocab(a.vocab, a.bow);
  const BowCorpus corpus = ReadBowCache(a.bow, &vocab);
  const LoadedModel model = LoadModel(a.checkpoint, corpus);
  manifest.AddInput(a.checkpoint);
  manifest.AddInput(a.bow);

  EvalReport report;
  report.knn_accuracy = KnnAccuracies(model.coords, corpus.labels, a.ks);

  std::vector<TokenList> reference;
  if (a.npmi_ref.empty()) {
    const fs::path tok = Sibling(a.bow, ".tokens");
    spdlog::warn("no --npmi-ref given; using the training corpus ({}) as the NPMI reference",
                 tok.string());
    RequireFile(tok, "token file");
    reference = ReadTokenLists(tok);
    manifest.AddInput(tok);
  } else {
    RequireFile(a.npmi_ref, "NPMI reference corpus");
    StopList custom;
    if (!a.stoplist.empty()) custom = ReadStopList(a.stoplist);
    const StopList& stop = a.stoplist.empty() ? DefaultStopList() : custom;
    for (const auto& d : ReadCorpusFile(a.npmi_ref))
      reference.push_back(PreprocessText(d.text, stop));
    manifest.AddInput(a.npmi_ref);
  }
  const auto top = TopWords(model.beta, vocab, a.top_words);
  std::unordered_set<std::string> keep;
  for (const auto& words : top) keep.insert(words.begin(), words.end());
  const CoocStats stats = CoocStats::Build(reference, a.window, &keep);
  const TopicCoherence coherence = ModelNpmi(model.beta, vocab, stats, a.top_words);
  report.npmi_per_topic = coherence.per_topic;
  report.npmi_mean = coherence.mean;

  const std::string json = EvalReportToJson(report);
  const fs::path out = PrepareFile(a.common.out, "eval", "eval.json");
  WriteText(out, json + "\n");
  nlohmann::ordered_json cfg;
  cfg["knn_k"] = a.ks;
  cfg["window"] = a.window;
  cfg["top_words"] = a.top_words;
  cfg["npmi_ref"] = a.npmi_ref.empty() ? "training corpus" : a.npmi_ref;
  manifest.SetConfig(cfg.dump());
  manifest.SetSeed(model.seed);
  manifest.AddOutput(out);
  manifest.Write(ManifestPathFor(out));
  std::cout << json << "\n";
  return kOk;
}

// ---- plot ----

struct PlotArgs {
  std::string checkpoint;
  std::string bow;
  std::string vocab;
  bool show_words = false;
  int width = 800;
  int height = 800;
  Common common;
};

int PlotCmd(const PlotArgs& a) {
  RunManifest manifest("plot", g_argv);
  RequireFile(a.bow, "bag-of-words file");
  const Vocabulary vocab = LoadVocab(a.vocab, a.bow);
  const BowCorpus corpus = ReadBowCache(a.bow, &vocab);
  const LoadedModel model = LoadModel(a.checkpoint, corpus);
  if (model.coords.cols() != 2)
    throw std::runtime_error("plot needs a 2-D visualization space; the model has dim=" +
                             std::to_string(model.coords.cols()));
  manifest.AddInput(a.checkpoint);
  manifest.AddInput(a.bow);
  ScatterSpec spec;
  spec.doc_coords = model.coords;
  spec.labels = corpus.labels;
  spec.topic_coords = model.topic_coords;
  spec.topic_words = TopWords(model.beta, vocab, 10);
  spec.width = a.width;
  spec.height = a.height;
  spec.palette = AssignPalette(corpus.labels);
  spec.show_words = a.show_words;
  const fs::path out = PrepareFile(a.common.out, "plot", "plot.svg");
  WriteText(out, RenderScatter(spec));
  nlohmann::ordered_json cfg;
  cfg["show_words"] = a.show_words;
  cfg["width"] = a.width;
  cfg["height"] = a.height;
  manifest.SetConfig(cfg.dump());
  manifest.SetSeed(model.seed);
  manifest.AddOutput(out);
  manifest.Write(ManifestPathFor(out));
  std::cout << "plot: " << out.string() << "\n";
  return kOk;
}

// ---- synth ----

struct SynthArgs {
  SyntheticOptions options;
  Common common;
};

int SynthCmd(const SynthArgs& a) {
  RunManifest manifest("synth", g_argv);
  const SyntheticCorpus s = GenerateSynthetic(a.options);
  const fs::path dir = PrepareDir(a.common.out, "synth", &a.options.seed);
  const fs::path bow = dir / "corpus.bow", voc = dir / "corpus.vocab",
                 tok = dir / "corpus.tokens";
  WriteBowCache(s.corpus, bow);
  WriteVocabulary(s.corpus.vocab, voc);
  WriteTokenLists(s.tokens, tok);
  nlohmann::ordered_json cfg;
  cfg["topics"] = a.options.topics;
  cfg["docs"] = a.options.docs;
  cfg["vocab"] = a.options.vocab;
  cfg["tokens_per_doc"] = a.options.tokens_per_doc;
  manifest.SetConfig(cfg.dump());
  manifest.SetSeed(a.options.seed);
  for (const auto& p : {bow, voc, tok}) manifest.AddOutput(p);
  manifest.Write(dir / "run.json");
  std::cout << "documents: " << s.corpus.num_docs()
            << "\nvocabulary: " << s.corpus.vocab_size()
            << "\noutput: " << dir.string() << "\n";
  return kOk;
}

void AddCommon(CLI::App* cmd, Common& c, const char* out_help) {
  cmd->add_option("--out", c.out, out_help);
  cmd->add_option("--config", c.config_path, "JSON config file (flags override it)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--threads", c.threads, "worker threads (default: $PLSV_THREADS or 1)")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--fast", c.fast, "allow unordered reductions");
  cmd->add_flag_function("--deterministic", [&c](int64_t) { c.fast = false; },
                         "order-fixed reductions (default)");
}

int Run(int argc, char** argv) {
  g_argv.assign(argv, argv + argc);
  CLI::App app{"PLSV document and topic visualization"};
  app.require_subcommand(1);
  app.fallthrough();
  bool verbose = false, quiet = false;
  app.add_flag("-v,--verbose", verbose, "debug logging");
  app.add_flag("-q,--quiet", quiet, "warnings and errors only");

  PreprocessArgs pre;
  auto* cmd_pre = app.add_subcommand("preprocess", "tokenize, stem and vectorize a corpus");
  cmd_pre->add_option("corpus", pre.corpus, "one document per line: label<TAB>text")
      ->required();
  cmd_pre->add_option("--vocab-size", pre.vocab_size, "vocabulary size")
      ->check(CLI::PositiveNumber);
  cmd_pre->add_option("--stoplist", pre.stoplist, "stopword file, one word per line");
  AddCommon(cmd_pre, pre.common, "output directory");

  TrainArgs tr;
  auto* cmd_tr = app.add_subcommand("train", "fit the model with variational inference");
  tr.app = cmd_tr;
  cmd_tr->add_option("bow", tr.bow, "bag-of-words file from preprocess")->required();
  cmd_tr->add_option("--topics", tr.flags.topics, "number of topics Z")
      ->check(CLI::PositiveNumber);
  cmd_tr->add_option("--dim", tr.flags.dim, "visualization dimension")
      ->check(CLI::PositiveNumber);
  cmd_tr->add_option("--kernel", tr.kernel, "gaussian|inverse-quadratic|inverse-multiquadric")
      ->check(CLI::IsMember({"gaussian", "inverse-quadratic", "inverse-multiquadric"}));
  cmd_tr->add_option("--epochs", tr.flags.epochs, "training epochs");
  cmd_tr->add_option("--seed", tr.flags.seed, "random seed");
  cmd_tr->add_option("--gamma", tr.flags.gamma, "prior variance of document coordinates");
  cmd_tr->add_option("--lr", tr.flags.lr, "Adam learning rate");
  cmd_tr->add_option("--batch-size", tr.flags.batch_size, "minibatch size");
  cmd_tr->add_option("--samples", tr.flags.samples, "latent samples per document");
  cmd_tr->add_option("--dropout", tr.flags.dropout, "dropout drop probability");
  cmd_tr->add_flag("--dropout-is-keep", tr.flags.dropout_is_keep,
                   "read --dropout as a keep probability");
  cmd_tr->add_option("--hidden1", tr.flags.hidden1, "first hidden layer width");
  cmd_tr->add_option("--hidden2", tr.flags.hidden2, "second hidden layer width");
  cmd_tr->add_option("--precision", tr.precision, "f32|f64")
      ->check(CLI::IsMember({"f32", "f64"}));
  cmd_tr->add_flag("--phi-l2", tr.flags.phi_l2, "Gaussian prior on topic coordinates");
  cmd_tr->add_flag("--decoder-batchnorm", tr.flags.decoder_batchnorm,
                   "batch-normalize W before the softmax");
  cmd_tr->add_option("--clip-norm", tr.flags.clip_norm, "global gradient norm clip");
  AddCommon(cmd_tr, tr.common, "run directory");

  TrainMapArgs tm;
  auto* cmd_tm = app.add_subcommand("train-map", "fit the model with MAP-EM");
  tm.app = cmd_tm;
  cmd_tm->add_option("bow", tm.bow, "bag-of-words file from preprocess")->required();
  cmd_tm->add_option("--topics", tm.flags.topics, "number of topics Z")
      ->check(CLI::PositiveNumber);
  cmd_tm->add_option("--dim", tm.flags.dim, "visualization dimension")
      ->check(CLI::PositiveNumber);
  cmd_tm->add_option("--em-iters", tm.flags.em_iters, "EM iterations");
  cmd_tm->add_option("--inner-iters", tm.flags.inner_iters,
                     "coordinate optimizer steps per M-step");
  cmd_tm->add_option("--lambda", tm.flags.lambda, "Dirichlet pseudo-count for beta");
  cmd_tm->add_option("--gamma", tm.flags.gamma, "prior variance of document coordinates");
  cmd_tm->add_option("--varphi", tm.flags.varphi,
                     "prior variance of topic coordinates (default N/Z)");
  cmd_tm->add_option("--inner-lr", tm.flags.inner_lr, "coordinate step size");
  cmd_tm->add_option("--seed", tm.flags.seed, "random seed");
  cmd_tm->add_flag("--resume", tm.resume, "not supported");
  AddCommon(cmd_tm, tm.common, "run directory");

  EvalArgs ev;
  auto* cmd_ev = app.add_subcommand("eval", "k-NN accuracy and NPMI coherence");
  cmd_ev->add_option("checkpoint", ev.checkpoint, "checkpoint or run directory")->required();
  cmd_ev->add_option("bow", ev.bow, "bag-of-words file")->required();
  cmd_ev->add_option("--knn-k", ev.ks, "neighbor counts, comma separated")
      ->delimiter(',');
  cmd_ev->add_option("--npmi-ref", ev.npmi_ref,
                     "reference corpus (default: the training corpus tokens)");
  cmd_ev->add_option("--stoplist", ev.stoplist, "stopwords for --npmi-ref");
  cmd_ev->add_option("--window", ev.window, "co-occurrence window in tokens")
      ->check(CLI::Range(size_t{2}, size_t{1000000}));
  cmd_ev->add_option("--top-words", ev.top_words, "words per topic for NPMI")
      ->check(CLI::Range(size_t{2}, size_t{1000}));
  cmd_ev->add_option("--vocab", ev.vocab, "vocabulary file (default: beside the bow file)");
  AddCommon(cmd_ev, ev.common, "report path");

  PlotArgs pl;
  auto* cmd_pl = app.add_subcommand("plot", "render documents and topics as SVG");
  cmd_pl->add_option("checkpoint", pl.checkpoint, "checkpoint or run directory")->required();
  cmd_pl->add_option("bow", pl.bow, "bag-of-words file")->required();
  cmd_pl->add_option("--vocab", pl.vocab, "vocabulary file (default: beside the bow file)");
  cmd_pl->add_flag("--show-words", pl.show_words, "label topics with their top words");
  cmd_pl->add_option("--width", pl.width, "canvas width")->check(CLI::PositiveNumber);
  cmd_pl->add_option("--height", pl.height, "canvas height")->check(CLI::PositiveNumber);
  AddCommon(cmd_pl, pl.common, "SVG path");

  SynthArgs sy;
  auto* cmd_sy = app.add_subcommand("synth", "generate a corpus with planted topics");
  cmd_sy->add_option("--topics", sy.options.topics, "planted topics")
      ->check(CLI::PositiveNumber);
  cmd_sy->add_option("--docs", sy.options.docs, "documents")->check(CLI::PositiveNumber);
  cmd_sy->add_option("--vocab", sy.options.vocab, "vocabulary size")
      ->check(CLI::PositiveNumber);
  cmd_sy->add_option("--tokens", sy.options.tokens_per_doc, "tokens per document")
      ->check(CLI::PositiveNumber);
  cmd_sy->add_option("--seed", sy.options.seed, "random seed");
  AddCommon(cmd_sy, sy.common, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  spdlog::set_level(verbose ? spdlog::level::debug
                            : quiet ? spdlog::level::warn : spdlog::level::info);
  spdlog::set_pattern("[%H:%M:%S] %^%l%$ %v");

  try {
    if (*cmd_pre) return Preprocess(pre);
    if (*cmd_tr) return TrainCmd(tr);
    if (*cmd_tm) return TrainMapCmd(tm);
    if (*cmd_ev) return EvalCmd(ev);
    if (*cmd_pl) return PlotCmd(pl);
    if (*cmd_sy) return SynthCmd(sy);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}

}  // namespace
}  // namespace plsv::cli

int main(int argc, char** argv) { return plsv::cli::Run(argc, argv); }
