#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "plsv/corpus.h"

namespace plsv {

namespace {

std::ifstream OpenForRead(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  return in;
}

std::ofstream OpenForWrite(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  return out;
}

void StripCarriageReturn(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

bool IsBlank(std::string_view s) {
  return s.find_first_not_of(" \t\r\n\f\v") == std::string_view::npos;
}

template <typename Int>
Int ParseInt(std::string_view s, const std::string& where) {
  Int value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw std::runtime_error(where + ": bad integer '" + std::string(s) + "'");
  return value;
}

}  // namespace

std::vector<RawDocument> ReadCorpusFile(const std::filesystem::path& path) {
  auto in = OpenForRead(path);
  std::vector<RawDocument> docs;
  std::string line;
  while (std::getline(in, line)) {
    StripCarriageReturn(line);
    RawDocument doc;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      doc.text = line;
    } else {
      doc.label = line.substr(0, tab);
      doc.text = line.substr(tab + 1);
    }
    if (IsBlank(doc.text)) continue;
    docs.push_back(std::move(doc));
  }
  return docs;
}

StopList ReadStopList(const std::filesystem::path& path) {
  auto in = OpenForRead(path);
  StopList list;
  std::string line;
  while (std::getline(in, line)) {
    StripCarriageReturn(line);
    if (!IsBlank(line)) list.insert(line);
  }
  return list;
}

void WriteVocabulary(const Vocabulary& vocab,
                     const std::filesystem::path& path) {
  auto out = OpenForWrite(path);
  for (const auto& w : vocab.words()) out << w << '\n';
  if (!out) throw std::runtime_error("write failed: '" + path.string() + "'");
}

Vocabulary ReadVocabulary(const std::filesystem::path& path) {
  auto in = OpenForRead(path);
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    StripCarriageReturn(line);
    words.push_back(line);
  }
  return Vocabulary(std::move(words));
}

void WriteBowCache(const BowCorpus& corpus,
                   const std::filesystem::path& path) {
  auto out = OpenForWrite(path);
  const auto& c = corpus.counts;
  out << c.rows() << ' ' << c.cols() << '\n';
  for (size_t n = 0; n < c.rows(); ++n) {
    out << corpus.labels[n] << '\t';
    auto cols = c.row_cols(n);
    auto counts = c.row_counts(n);
    for (size_t k = 0; k < cols.size(); ++k) {
      if (k > 0) out << ' ';
      out << cols[k] << ':' << counts[k];
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: '" + path.string() + "'");
}

BowCorpus ReadBowCache(const std::filesystem::path& path,
                       const Vocabulary* vocab) {
  auto in = OpenForRead(path);
  const std::string where = path.string();
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(where + ": empty file");
  StripCarriageReturn(line);
  std::istringstream header(line);
  size_t n_docs = 0, v = 0;
  if (!(header >> n_docs >> v))
    throw std::runtime_error(where + ": bad header '" + line + "'");
  if (vocab != nullptr && vocab->size() != v)
    throw std::runtime_error(where + ": header V=" + std::to_string(v) +
                             " but vocabulary has " +
                             std::to_string(vocab->size()) + " words");
  BowCorpus corpus;
  corpus.counts = SparseCounts(v);
  if (vocab != nullptr) corpus.vocab = *vocab;
  std::vector<uint32_t> cols, counts;
  for (size_t n = 0; n < n_docs; ++n) {
    if (!std::getline(in, line))
      throw std::runtime_error(where + ": expected " + std::to_string(n_docs) +
                               " documents, found " + std::to_string(n));
    StripCarriageReturn(line);
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw std::runtime_error(where + ": line " + std::to_string(n + 2) +
                               " has no label column");
    corpus.labels.push_back(line.substr(0, tab));
    cols.clear();
    counts.clear();
    std::string_view rest(line);
    rest.remove_prefix(tab + 1);
    while (!rest.empty()) {
      const auto sp = rest.find(' ');
      std::string_view item = rest.substr(0, sp);
      rest = sp == std::string_view::npos ? std::string_view{} : rest.substr(sp + 1);
      if (item.empty()) continue;
      const auto colon = item.find(':');
      if (colon == std::string_view::npos)
        throw std::runtime_error(where + ": bad entry '" + std::string(item) + "'");
      cols.push_back(ParseInt<uint32_t>(item.substr(0, colon), where));
      counts.push_back(ParseInt<uint32_t>(item.substr(colon + 1), where));
    }
    if (cols.empty())
      throw std::runtime_error(where + ": document " + std::to_string(n) +
                               " is empty");
    corpus.counts.AppendRow(cols, counts);
  }
  return corpus;
}

void WriteTokenLists(const std::vector<TokenList>& docs,
                     const std::filesystem::path& path) {
  auto out = OpenForWrite(path);
  for (const auto& doc : docs) {
    for (size_t i = 0; i < doc.size(); ++i) {
      if (i) out << ' ';
      out << doc[i];
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

std::vector<TokenList> ReadTokenLists(const std::filesystem::path& path) {
  auto in = OpenForRead(path);
  std::vector<TokenList> docs;
  std::string line;
  while (std::getline(in, line)) {
    StripCarriageReturn(line);
    std::istringstream ss(line);
    TokenList& doc = docs.emplace_back();
    std::string tok;
    while (ss >> tok) doc.push_back(tok);
  }
  return docs;
}

}  // namespace plsv
