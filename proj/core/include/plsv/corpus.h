#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "plsv/sparse.h"

namespace plsv {

struct RawDocument {
  std::string label;
  std::string text;
};

using StopList = std::unordered_set<std::string>;
using TokenList = std::vector<std::string>;

// Word <-> id mapping. Ids are 0..size()-1 in insertion order.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> words);

  size_t size() const { return words_.size(); }
  const std::string& word(size_t id) const { return words_.at(id); }
  std::optional<uint32_t> id(std::string_view word) const;
  const std::vector<std::string>& words() const { return words_; }

  bool operator==(const Vocabulary& other) const {
    return words_ == other.words_;
  }

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, uint32_t> index_;
};

// Documents x vocabulary count matrix with one label per row. Every row has
// a positive total count.
struct BowCorpus {
  SparseCounts counts;
  std::vector<std::string> labels;
  Vocabulary vocab;

  size_t num_docs() const { return counts.rows(); }
  size_t vocab_size() const { return counts.cols(); }
};

// Lowercases ASCII letters; every other byte separates tokens. Tokens shorter
// than two characters are dropped.
TokenList Tokenize(std::string_view text);

// Classic (1980) Porter stemmer. Expects a lowercase word.
std::string PorterStem(std::string_view word);

// Drops stopwords, then stems what remains.
TokenList Preprocess(const TokenList& tokens, const StopList& stoplist);

// Tokenize + Preprocess.
TokenList PreprocessText(std::string_view text, const StopList& stoplist);

// Keeps the max_size most frequent tokens (frequency descending, ties
// lexicographic). Word ids follow that order.
Vocabulary BuildVocab(const std::vector<TokenList>& docs, size_t max_size);

// Counts in-vocabulary tokens per document. Documents left empty are dropped
// along with their labels.
BowCorpus VectorizeTokens(const std::vector<TokenList>& docs,
                          const std::vector<std::string>& labels,
                          const Vocabulary& vocab);

BowCorpus Vectorize(const std::vector<RawDocument>& docs,
                    const Vocabulary& vocab, const StopList& stoplist);

const StopList& DefaultStopList();

// File formats.
//   corpus:  one document per line, "label<TAB>text" (a line without a tab is
//            an unlabeled document).
//   stoplist: one lowercase word per line.
//   vocab:   one word per line; line number is the id.
//   bow:     header "N V", then "label<TAB>v:c v:c ..." per document with
//            ascending v.
//   tokens:  one preprocessed document per line, tokens separated by spaces.
std::vector<RawDocument> ReadCorpusFile(const std::filesystem::path& path);
StopList ReadStopList(const std::filesystem::path& path);
void WriteVocabulary(const Vocabulary& vocab, const std::filesystem::path& path);
Vocabulary ReadVocabulary(const std::filesystem::path& path);
void WriteBowCache(const BowCorpus& corpus, const std::filesystem::path& path);
// Reads counts and labels; the vocabulary is attached when given and must
// match the header's V.
BowCorpus ReadBowCache(const std::filesystem::path& path,
                       const Vocabulary* vocab = nullptr);
void WriteTokenLists(const std::vector<TokenList>& docs,
                     const std::filesystem::path& path);
std::vector<TokenList> ReadTokenLists(const std::filesystem::path& path);

}  // namespace plsv
