// Porter, "An algorithm for suffix stripping" (1980), original rule set:
// step 2 uses ABLI -> ABLE and has no LOGI rule.

#include <array>
#include <string>
#include <string_view>
#include <utility>

#include "plsv/corpus.h"

namespace plsv {

namespace {

struct Rule {
  std::string_view suffix;
  std::string_view replacement;
};

class Stemmer {
 public:
  explicit Stemmer(std::string_view word) : b_(word) {}

  std::string Run() {
    if (b_.size() <= 2) return b_;
    Step1a();
    Step1b();
    Step1c();
    Step2();
    Step3();
    Step4();
    Step5();
    return b_;
  }

 private:
  bool IsConsonant(size_t i) const {
    switch (b_[i]) {
      case 'a':
      case 'e':
      case 'i':
      case 'o':
      case 'u':
        return false;
      case 'y':
        return i == 0 ? true : !IsConsonant(i - 1);
      default:
        return true;
    }
  }

  // Number of VC sequences in b_[0, len).
  int Measure(size_t len) const {
    int m = 0;
    size_t i = 0;
    while (i < len && IsConsonant(i)) ++i;
    while (i < len) {
      while (i < len && !IsConsonant(i)) ++i;
      if (i >= len) break;
      while (i < len && IsConsonant(i)) ++i;
      ++m;
    }
    return m;
  }

  bool HasVowel(size_t len) const {
    for (size_t i = 0; i < len; ++i)
      if (!IsConsonant(i)) return true;
    return false;
  }

  bool EndsDoubleConsonant(size_t len) const {
    return len >= 2 && b_[len - 1] == b_[len - 2] && IsConsonant(len - 1);
  }

  // cvc where the final c is not w, x or y.
  bool EndsCvc(size_t len) const {
    if (len < 3) return false;
    if (!IsConsonant(len - 1) || IsConsonant(len - 2) || !IsConsonant(len - 3))
      return false;
    const char c = b_[len - 1];
    return c != 'w' && c != 'x' && c != 'y';
  }

  bool EndsWith(std::string_view s) const {
    return b_.size() >= s.size() &&
           std::string_view(b_).substr(b_.size() - s.size()) == s;
  }

  size_t StemLength(std::string_view suffix) const {
    return b_.size() - suffix.size();
  }

  void Replace(std::string_view suffix, std::string_view replacement) {
    b_.replace(b_.size() - suffix.size(), suffix.size(), replacement);
  }

  // Finds the first rule whose suffix matches and applies it when the stem
  // measure exceeds min_measure. Only one rule is ever considered.
  template <size_t N>
  void ApplyFirstMatch(const std::array<Rule, N>& rules, int min_measure) {
    for (const Rule& r : rules) {
      if (!EndsWith(r.suffix)) continue;
      if (Measure(StemLength(r.suffix)) > min_measure)
        Replace(r.suffix, r.replacement);
      return;
    }
  }

  void Step1a() {
    if (EndsWith("sses")) {
      Replace("sses", "ss");
    } else if (EndsWith("ies")) {
      Replace("ies", "i");
    } else if (EndsWith("ss")) {
      // unchanged
    } else if (EndsWith("s")) {
      Replace("s", "");
    }
  }

  void Step1b() {
    bool trimmed = false;
    if (EndsWith("eed")) {
      if (Measure(StemLength("eed")) > 0) Replace("eed", "ee");
    } else if (EndsWith("ed") && HasVowel(StemLength("ed"))) {
      Replace("ed", "");
      trimmed = true;
    } else if (EndsWith("ing") && HasVowel(StemLength("ing"))) {
      Replace("ing", "");
      trimmed = true;
    }
    if (!trimmed) return;
    if (EndsWith("at")) {
      Replace("at", "ate");
    } else if (EndsWith("bl")) {
      Replace("bl", "ble");
    } else if (EndsWith("iz")) {
      Replace("iz", "ize");
    } else if (EndsDoubleConsonant(b_.size())) {
      const char c = b_.back();
      if (c != 'l' && c != 's' && c != 'z') b_.pop_back();
    } else if (Measure(b_.size()) == 1 && EndsCvc(b_.size())) {
      b_.push_back('e');
    }
  }

  void Step1c() {
    if (EndsWith("y") && HasVowel(b_.size() - 1)) b_.back() = 'i';
  }

  void Step2() {
    static constexpr std::array<Rule, 20> kRules = {{
        {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"},
        {"anci", "ance"},   {"izer", "ize"},    {"abli", "able"},
        {"alli", "al"},     {"entli", "ent"},   {"eli", "e"},
        {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
        {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"},
        {"fulness", "ful"}, {"ousness", "ous"}, {"aliti", "al"},
        {"iviti", "ive"},   {"biliti", "ble"},
    }};
    ApplyFirstMatch(kRules, 0);
  }

  void Step3() {
    static constexpr std::array<Rule, 7> kRules = {{
        {"icate", "ic"},
        {"ative", ""},
        {"alize", "al"},
        {"iciti", "ic"},
        {"ical", "ic"},
        {"ful", ""},
        {"ness", ""},
    }};
    ApplyFirstMatch(kRules, 0);
  }

  void Step4() {
    static constexpr std::array<std::string_view, 19> kSuffixes = {
        "al",  "ance", "ence", "er",  "ic",  "able", "ible",
        "ant", "ement", "ment", "ent", "ion", "ou",   "ism",
        "ate", "iti",  "ous",  "ive", "ize",
    };
    for (std::string_view s : kSuffixes) {
      if (!EndsWith(s)) continue;
      const size_t stem = StemLength(s);
      if (Measure(stem) <= 1) return;
      if (s == "ion" && !(stem > 0 && (b_[stem - 1] == 's' || b_[stem - 1] == 't')))
        return;
      b_.resize(stem);
      return;
    }
  }

  void Step5() {
    if (EndsWith("e")) {
      const size_t stem = b_.size() - 1;
      const int m = Measure(stem);
      if (m > 1 || (m == 1 && !EndsCvc(stem))) b_.pop_back();
    }
    if (Measure(b_.size()) > 1 && EndsDoubleConsonant(b_.size()) &&
        b_.back() == 'l')
      b_.pop_back();
  }

  std::string b_;
};

}  // namespace

std::string PorterStem(std::string_view word) { return Stemmer(word).Run(); }

}  // namespace plsv
