#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "plsv/corpus.h"
#include "plsv/matrix.h"
#include "plsv/rng.h"
#include "plsv/sparse.h"

namespace plsv {

// Leave-one-out k-NN accuracy in coordinate space. Neighbors are ordered by
// Euclidean distance, then by lower index. The predicted label is the most
// frequent among the k nearest; ties go to the label whose first occurrence
// is nearest. Requires 1 <= k < N.
double KnnAccuracy(const Matrix<double>& coords,
                   std::span<const std::string> labels, size_t k);

// Same, for several k at once.
std::map<size_t, double> KnnAccuracies(const Matrix<double>& coords,
                                       std::span<const std::string> labels,
                                       std::span<const size_t> ks);

// Fraction of documents carrying the most frequent label.
double MajorityClassRate(std::span<const std::string> labels);

// Projects L1-normalized counts onto `dim` Gaussian random directions.
Matrix<double> RandomProjection(const SparseCounts& counts, size_t dim, Rng& rng);

// Window co-occurrence statistics over a reference corpus. Each window of
// `window` consecutive tokens counts every distinct word and every unordered
// pair of distinct words once. Documents shorter than the window form a
// single window.
class CoocStats {
 public:
  CoocStats(size_t window, uint64_t total_windows);

  // keep, when non-null, restricts the tracked words.
  static CoocStats Build(std::span<const TokenList> docs, size_t window,
                         const std::unordered_set<std::string>* keep = nullptr);

  void AddWordCount(std::string_view word, uint64_t count);
  void AddPairCount(std::string_view a, std::string_view b, uint64_t count);

  size_t window() const { return window_; }
  uint64_t total_windows() const { return total_windows_; }
  bool Contains(std::string_view word) const;
  // Probabilities; unknown words throw std::invalid_argument naming the word.
  double Unigram(std::string_view word) const;
  double Joint(std::string_view a, std::string_view b) const;

 private:
  uint32_t Intern(std::string_view word);
  uint32_t IdOf(std::string_view word) const;
  static uint64_t PairKey(uint32_t a, uint32_t b);

  size_t window_;
  uint64_t total_windows_;
  std::unordered_map<std::string, uint32_t> ids_;
  std::vector<uint64_t> word_counts_;
  std::unordered_map<uint64_t, uint64_t> pair_counts_;
};

// log(p_ij / (p_i p_j)) / -log p_ij; -1 when the pair never co-occurs.
double NpmiPair(const CoocStats& stats, std::string_view a, std::string_view b);

// Word ids of the t most probable words of a topic, ties by lower id.
std::vector<uint32_t> TopWordIds(std::span<const double> topic, size_t t);
std::vector<std::vector<std::string>> TopWords(const Matrix<double>& beta,
                                               const Vocabulary& vocab,
                                               size_t t);

// Mean pairwise NPMI of a word list. Words missing from the statistics make
// their pairs count as -1.
double WordsNpmi(std::span<const std::string> words, const CoocStats& stats);
double TopicNpmi(const Matrix<double>& beta, size_t z, const Vocabulary& vocab,
                 const CoocStats& stats, size_t t = 10);

struct TopicCoherence {
  std::vector<double> per_topic;
  double mean = 0;
};

TopicCoherence ModelNpmi(const Matrix<double>& beta, const Vocabulary& vocab,
                         const CoocStats& stats, size_t t = 10);

struct EvalReport {
  std::map<size_t, double> knn_accuracy;
  std::vector<double> npmi_per_topic;
  double npmi_mean = 0;
};

std::string EvalReportToJson(const EvalReport& report);

}  // namespace plsv
