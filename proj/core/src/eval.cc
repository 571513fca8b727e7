#include "plsv/eval.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>

#include <spdlog/spdlog.h>

#include "json.hpp"

namespace plsv {

namespace {

std::vector<uint32_t> LabelIds(std::span<const std::string> labels) {
  std::unordered_map<std::string_view, uint32_t> ids;
  std::vector<uint32_t> out;
  out.reserve(labels.size());
  for (const auto& l : labels) {
    auto [it, inserted] = ids.emplace(l, static_cast<uint32_t>(ids.size()));
    out.push_back(it->second);
  }
  return out;
}

}  // namespace

std::map<size_t, double> KnnAccuracies(const Matrix<double>& coords,
                                       std::span<const std::string> labels,
                                       std::span<const size_t> ks) {
  const size_t n = coords.rows();
  if (labels.size() != n)
    throw std::invalid_argument("KnnAccuracy: " + std::to_string(labels.size()) +
                                " labels for " + std::to_string(n) + " points");
  if (ks.empty()) throw std::invalid_argument("KnnAccuracy: no k given");
  size_t kmax = 0;
  for (size_t k : ks) {
    if (k < 1 || k >= n)
      throw std::invalid_argument("KnnAccuracy: k=" + std::to_string(k) +
                                  " must satisfy 1 <= k < N=" + std::to_string(n));
    kmax = std::max(kmax, k);
  }
  const std::vector<uint32_t> ids = LabelIds(labels);
  const size_t num_labels =
      ids.empty() ? 0 : *std::max_element(ids.begin(), ids.end()) + 1;

  std::vector<size_t> correct(ks.size(), 0);
  std::vector<std::pair<double, size_t>> dist;
  dist.reserve(n - 1);
  std::vector<uint32_t> votes(num_labels);
  for (size_t i = 0; i < n; ++i) {
    dist.clear();
    const auto xi = coords.row(i);
    for (size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const auto xj = coords.row(j);
      double d2 = 0;
      for (size_t c = 0; c < xi.size(); ++c) {
        const double diff = xi[c] - xj[c];
        d2 += diff * diff;
      }
      dist.emplace_back(d2, j);
    }
    std::partial_sort(dist.begin(), dist.begin() + kmax, dist.end());
    for (size_t q = 0; q < ks.size(); ++q) {
      std::fill(votes.begin(), votes.end(), 0);
      for (size_t r = 0; r < ks[q]; ++r) ++votes[ids[dist[r].second]];
      // Scanning in neighbor order and requiring a strictly larger count
      // keeps the nearest label among tied ones.
      uint32_t best = ids[dist[0].second];
      for (size_t r = 1; r < ks[q]; ++r) {
        const uint32_t l = ids[dist[r].second];
        if (votes[l] > votes[best]) best = l;
      }
      if (best == ids[i]) ++correct[q];
    }
  }
  std::map<size_t, double> out;
  for (size_t q = 0; q < ks.size(); ++q)
    out[ks[q]] = static_cast<double>(correct[q]) / static_cast<double>(n);
  return out;
}

double KnnAccuracy(const Matrix<double>& coords,
                   std::span<const std::string> labels, size_t k) {
  const size_t ks[] = {k};
  return KnnAccuracies(coords, labels, ks).at(k);
}

double MajorityClassRate(std::span<const std::string> labels) {
  if (labels.empty()) throw std::invalid_argument("MajorityClassRate: no labels");
  std::unordered_map<std::string_view, size_t> counts;
  size_t best = 0;
  for (const auto& l : labels) best = std::max(best, ++counts[l]);
  return static_cast<double>(best) / static_cast<double>(labels.size());
}

Matrix<double> RandomProjection(const SparseCounts& counts, size_t dim, Rng& rng) {
  Matrix<double> proj(counts.cols(), dim);
  for (double& v : proj.values()) v = rng.Normal();
  Matrix<double> out(counts.rows(), dim);
  for (size_t n = 0; n < counts.rows(); ++n) {
    const double total = static_cast<double>(counts.RowTotal(n));
    if (total == 0) continue;
    auto row = out.row(n);
    for (size_t k = counts.row_begin(n); k < counts.row_end(n); ++k) {
      const double w = counts.count_at(k) / total;
      const auto p = proj.row(counts.col_at(k));
      for (size_t c = 0; c < dim; ++c) row[c] += w * p[c];
    }
  }
  return out;
}

CoocStats::CoocStats(size_t window, uint64_t total_windows)
    : window_(window), total_windows_(total_windows) {
  if (window < 2) throw std::invalid_argument("CoocStats: window must be >= 2");
  if (total_windows == 0)
    throw std::invalid_argument("CoocStats: reference corpus has no windows");
}

uint64_t CoocStats::PairKey(uint32_t a, uint32_t b) {
  if (a > b) std::swap(a, b);
  return (static_cast<uint64_t>(a) << 32) | b;
}

uint32_t CoocStats::Intern(std::string_view word) {
  auto [it, inserted] =
      ids_.emplace(std::string(word), static_cast<uint32_t>(ids_.size()));
  if (inserted) word_counts_.push_back(0);
  return it->second;
}

uint32_t CoocStats::IdOf(std::string_view word) const {
  auto it = ids_.find(std::string(word));
  if (it == ids_.end())
    throw std::invalid_argument("CoocStats: word '" + std::string(word) +
                                "' does not occur in the reference corpus");
  return it->second;
}

void CoocStats::AddWordCount(std::string_view word, uint64_t count) {
  word_counts_[Intern(word)] += count;
}

void CoocStats::AddPairCount(std::string_view a, std::string_view b,
                             uint64_t count) {
  if (a == b) throw std::invalid_argument("CoocStats: pair of identical words");
  pair_counts_[PairKey(Intern(a), Intern(b))] += count;
}

bool CoocStats::Contains(std::string_view word) const {
  return ids_.find(std::string(word)) != ids_.end();
}

double CoocStats::Unigram(std::string_view word) const {
  return static_cast<double>(word_counts_[IdOf(word)]) /
         static_cast<double>(total_windows_);
}

double CoocStats::Joint(std::string_view a, std::string_view b) const {
  const uint32_t ia = IdOf(a), ib = IdOf(b);
  if (ia == ib) return Unigram(a);
  auto it = pair_counts_.find(PairKey(ia, ib));
  const uint64_t c = it == pair_counts_.end() ? 0 : it->second;
  return static_cast<double>(c) / static_cast<double>(total_windows_);
}

CoocStats CoocStats::Build(std::span<const TokenList> docs, size_t window,
                           const std::unordered_set<std::string>* keep) {
  if (window < 2) throw std::invalid_argument("CoocStats: window must be >= 2");
  uint64_t total = 0;
  for (const auto& d : docs)
    if (!d.empty()) total += d.size() >= window ? d.size() - window + 1 : 1;
  if (total == 0) throw std::invalid_argument("CoocStats: empty reference corpus");

  CoocStats stats(window, total);
  std::vector<uint32_t> doc_ids, present;
  for (const auto& d : docs) {
    if (d.empty()) continue;
    doc_ids.clear();
    for (const auto& tok : d) {
      if (keep && !keep->contains(tok)) {
        doc_ids.push_back(UINT32_MAX);
      } else {
        doc_ids.push_back(stats.Intern(tok));
      }
    }
    const size_t span = std::min(window, d.size());
    for (size_t start = 0; start + span <= d.size(); ++start) {
      present.clear();
      for (size_t i = start; i < start + span; ++i)
        if (doc_ids[i] != UINT32_MAX) present.push_back(doc_ids[i]);
      std::sort(present.begin(), present.end());
      present.erase(std::unique(present.begin(), present.end()), present.end());
      for (size_t a = 0; a < present.size(); ++a) {
        ++stats.word_counts_[present[a]];
        for (size_t b = a + 1; b < present.size(); ++b)
          ++stats.pair_counts_[PairKey(present[a], present[b])];
      }
    }
  }
  return stats;
}

double NpmiPair(const CoocStats& stats, std::string_view a, std::string_view b) {
  const double pa = stats.Unigram(a), pb = stats.Unigram(b);
  const double pab = stats.Joint(a, b);
  if (pab <= 0) return -1.0;
  if (pab >= 1) return 1.0;
  const double v = std::log(pab / (pa * pb)) / -std::log(pab);
  return std::clamp(v, -1.0, 1.0);
}

std::vector<uint32_t> TopWordIds(std::span<const double> topic, size_t t) {
  if (t > topic.size())
    throw std::invalid_argument("TopWordIds: t=" + std::to_string(t) +
                                " exceeds vocabulary size " +
                                std::to_string(topic.size()));
  std::vector<uint32_t> ids(topic.size());
  std::iota(ids.begin(), ids.end(), 0u);
  std::partial_sort(ids.begin(), ids.begin() + t, ids.end(),
                    [&](uint32_t x, uint32_t y) {
                      if (topic[x] != topic[y]) return topic[x] > topic[y];
                      return x < y;
                    });
  ids.resize(t);
  return ids;
}

std::vector<std::vector<std::string>> TopWords(const Matrix<double>& beta,
                                               const Vocabulary& vocab,
                                               size_t t) {
  if (beta.cols() != vocab.size())
    throw std::invalid_argument("TopWords: beta/vocabulary size mismatch");
  std::vector<std::vector<std::string>> out;
  for (size_t z = 0; z < beta.rows(); ++z) {
    auto& words = out.emplace_back();
    for (uint32_t id : TopWordIds(beta.row(z), std::min(t, beta.cols())))
      words.push_back(vocab.word(id));
  }
  return out;
}

double WordsNpmi(std::span<const std::string> words, const CoocStats& stats) {
  if (words.size() < 2) throw std::invalid_argument("WordsNpmi: need at least 2 words");
  for (const auto& w : words)
    if (!stats.Contains(w))
      spdlog::warn("word '{}' is absent from the NPMI reference; its pairs score -1", w);
  double sum = 0;
  size_t pairs = 0;
  for (size_t i = 0; i < words.size(); ++i) {
    for (size_t j = i + 1; j < words.size(); ++j, ++pairs) {
      if (!stats.Contains(words[i]) || !stats.Contains(words[j])) {
        sum += -1.0;
      } else {
        sum += NpmiPair(stats, words[i], words[j]);
      }
    }
  }
  return sum / static_cast<double>(pairs);
}

double TopicNpmi(const Matrix<double>& beta, size_t z, const Vocabulary& vocab,
                 const CoocStats& stats, size_t t) {
  if (z >= beta.rows()) throw std::out_of_range("TopicNpmi: topic out of range");
  if (beta.cols() != vocab.size())
    throw std::invalid_argument("TopicNpmi: beta/vocabulary size mismatch");
  std::vector<std::string> words;
  for (uint32_t id : TopWordIds(beta.row(z), t)) words.push_back(vocab.word(id));
  return WordsNpmi(words, stats);
}

TopicCoherence ModelNpmi(const Matrix<double>& beta, const Vocabulary& vocab,
                         const CoocStats& stats, size_t t) {
  TopicCoherence out;
  for (size_t z = 0; z < beta.rows(); ++z)
    out.per_topic.push_back(TopicNpmi(beta, z, vocab, stats, t));
  out.mean = std::accumulate(out.per_topic.begin(), out.per_topic.end(), 0.0) /
             static_cast<double>(std::max<size_t>(1, out.per_topic.size()));
  return out;
}

std::string EvalReportToJson(const EvalReport& report) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json knn = nlohmann::ordered_json::object();
  for (const auto& [k, acc] : report.knn_accuracy) knn[std::to_string(k)] = acc;
  j["knn_accuracy"] = std::move(knn);
  j["npmi_per_topic"] = report.npmi_per_topic;
  j["npmi_mean"] = report.npmi_mean;
  return j.dump(2);
}

}  // namespace plsv
