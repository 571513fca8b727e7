#include "plsv/corpus.h"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace plsv {

Vocabulary::Vocabulary(std::vector<std::string> words)
    : words_(std::move(words)) {
  index_.reserve(words_.size());
  for (size_t i = 0; i < words_.size(); ++i) {
    if (!index_.emplace(words_[i], static_cast<uint32_t>(i)).second)
      throw std::invalid_argument("Vocabulary: duplicate word '" + words_[i] +
                                  "'");
  }
}

std::optional<uint32_t> Vocabulary::id(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

TokenList Tokenize(std::string_view text) {
  TokenList tokens;
  std::string current;
  auto flush = [&] {
    if (current.size() >= 2) tokens.push_back(current);
    current.clear();
  };
  for (char ch : text) {
    const unsigned char c = static_cast<unsigned char>(ch);
    if (c >= 'A' && c <= 'Z') {
      current.push_back(static_cast<char>(c - 'A' + 'a'));
    } else if (c >= 'a' && c <= 'z') {
      current.push_back(static_cast<char>(c));
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

TokenList Preprocess(const TokenList& tokens, const StopList& stoplist) {
  TokenList out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (stoplist.contains(t)) continue;
    out.push_back(PorterStem(t));
  }
  return out;
}

TokenList PreprocessText(std::string_view text, const StopList& stoplist) {
  return Preprocess(Tokenize(text), stoplist);
}

Vocabulary BuildVocab(const std::vector<TokenList>& docs, size_t max_size) {
  if (max_size == 0) throw std::invalid_argument("BuildVocab: max_size must be positive");
  std::unordered_map<std::string, uint64_t> freq;
  for (const auto& doc : docs)
    for (const auto& t : doc) ++freq[t];
  if (freq.empty())
    throw std::invalid_argument("BuildVocab: every document is empty");
  std::vector<std::pair<std::string, uint64_t>> ranked(freq.begin(), freq.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (ranked.size() > max_size) ranked.resize(max_size);
  std::vector<std::string> words;
  words.reserve(ranked.size());
  for (auto& [w, _] : ranked) words.push_back(std::move(w));
  return Vocabulary(std::move(words));
}

BowCorpus VectorizeTokens(const std::vector<TokenList>& docs,
                          const std::vector<std::string>& labels,
                          const Vocabulary& vocab) {
  if (docs.size() != labels.size())
    throw std::invalid_argument("VectorizeTokens: docs/labels length mismatch");
  BowCorpus out;
  out.counts = SparseCounts(vocab.size());
  out.vocab = vocab;
  std::map<uint32_t, uint32_t> row;
  std::vector<uint32_t> cols, counts;
  for (size_t n = 0; n < docs.size(); ++n) {
    row.clear();
    for (const auto& t : docs[n]) {
      if (auto id = vocab.id(t)) ++row[*id];
    }
    if (row.empty()) continue;
    cols.clear();
    counts.clear();
    for (auto [v, c] : row) {
      cols.push_back(v);
      counts.push_back(c);
    }
    out.counts.AppendRow(cols, counts);
    out.labels.push_back(labels[n]);
  }
  if (out.counts.rows() == 0)
    throw std::invalid_argument(
        "Vectorize: every document is empty after vocabulary filtering");
  return out;
}

BowCorpus Vectorize(const std::vector<RawDocument>& docs,
                    const Vocabulary& vocab, const StopList& stoplist) {
  std::vector<TokenList> tokens;
  std::vector<std::string> labels;
  tokens.reserve(docs.size());
  labels.reserve(docs.size());
  for (const auto& d : docs) {
    tokens.push_back(PreprocessText(d.text, stoplist));
    labels.push_back(d.label);
  }
  return VectorizeTokens(tokens, labels, vocab);
}

}  // namespace plsv
