// Porter's suffix-stripping algorithm, following the structure of the
// reference ANSI C implementation (including its "bli" -> "ble" and "logi"
// -> "log" refinements).

#include <string>
#include <string_view>

#include "apc/corpus.hpp"

namespace apc {
namespace {

class PorterStemmer {
 public:
  explicit PorterStemmer(std::string_view word) : b_(word), k_(static_cast<int>(word.size()) - 1) {}

  std::string run() {
    if (k_ <= 1) return b_;
    step1ab();
    if (k_ > 0) {
      step1c();
      step2();
      step3();
      step4();
      step5();
    }
    return b_.substr(0, static_cast<std::size_t>(k_ + 1));
  }

 private:
  bool cons(int i) const {
    switch (b_[static_cast<std::size_t>(i)]) {
      case 'a': case 'e': case 'i': case 'o': case 'u':
        return false;
      case 'y':
        return i == 0 ? true : !cons(i - 1);
      default:
        return true;
    }
  }

  // Number of VC sequences in b[0..j].
  int m() const {
    int n = 0;
    int i = 0;
    while (true) {
      if (i > j_) return n;
      if (!cons(i)) break;
      ++i;
    }
    ++i;
    while (true) {
      while (true) {
        if (i > j_) return n;
        if (cons(i)) break;
        ++i;
      }
      ++i;
      ++n;
      while (true) {
        if (i > j_) return n;
        if (!cons(i)) break;
        ++i;
      }
      ++i;
    }
  }

  bool vowel_in_stem() const {
    for (int i = 0; i <= j_; ++i) {
      if (!cons(i)) return true;
    }
    return false;
  }

  bool double_cons(int j) const {
    if (j < 1) return false;
    if (b_[static_cast<std::size_t>(j)] != b_[static_cast<std::size_t>(j - 1)]) return false;
    return cons(j);
  }

  // consonant-vowel-consonant ending at i, last consonant not w, x or y.
  bool cvc(int i) const {
    if (i < 2 || !cons(i) || cons(i - 1) || !cons(i - 2)) return false;
    const char ch = b_[static_cast<std::size_t>(i)];
    return ch != 'w' && ch != 'x' && ch != 'y';
  }

  bool ends(std::string_view s) {
    const int len = static_cast<int>(s.size());
    if (len > k_ + 1) return false;
    if (std::string_view(b_).substr(static_cast<std::size_t>(k_ - len + 1), s.size()) != s) return false;
    j_ = k_ - len;
    return true;
  }

  void set_to(std::string_view s) {
    b_.replace(static_cast<std::size_t>(j_ + 1), static_cast<std::size_t>(k_ - j_), s);
    k_ = j_ + static_cast<int>(s.size());
  }

  void replace_if_measured(std::string_view s) {
    if (m() > 0) set_to(s);
  }

  char at(int i) const { return b_[static_cast<std::size_t>(i)]; }

  void step1ab() {
    if (at(k_) == 's') {
      if (ends("sses")) k_ -= 2;
      else if (ends("ies")) set_to("i");
      else if (at(k_ - 1) != 's') --k_;
    }
    if (ends("eed")) {
      if (m() > 0) --k_;
    } else if ((ends("ed") || ends("ing")) && vowel_in_stem()) {
      k_ = j_;
      if (ends("at")) set_to("ate");
      else if (ends("bl")) set_to("ble");
      else if (ends("iz")) set_to("ize");
      else if (double_cons(k_)) {
        --k_;
        const char ch = at(k_);
        if (ch == 'l' || ch == 's' || ch == 'z') ++k_;
      } else if (m() == 1 && cvc(k_)) {
        set_to("e");
      }
    }
  }

  void step1c() {
    if (ends("y") && vowel_in_stem()) b_[static_cast<std::size_t>(k_)] = 'i';
  }

  template <std::size_t N>
  void rules(const std::pair<std::string_view, std::string_view> (&table)[N]) {
    for (const auto& [suffix, replacement] : table) {
      if (ends(suffix)) {
        replace_if_measured(replacement);
        return;
      }
    }
  }

  void step2() {
    if (k_ < 1) return;
    using R = std::pair<std::string_view, std::string_view>;
    switch (at(k_ - 1)) {
      case 'a': { static const R t[] = {{"ational", "ate"}, {"tional", "tion"}}; rules(t); break; }
      case 'c': { static const R t[] = {{"enci", "ence"}, {"anci", "ance"}}; rules(t); break; }
      case 'e': { static const R t[] = {{"izer", "ize"}}; rules(t); break; }
      case 'l': {
        static const R t[] = {{"bli", "ble"}, {"alli", "al"}, {"entli", "ent"}, {"eli", "e"}, {"ousli", "ous"}};
        rules(t);
        break;
      }
      case 'o': { static const R t[] = {{"ization", "ize"}, {"ation", "ate"}, {"ator", "ate"}}; rules(t); break; }
      case 's': {
        static const R t[] = {{"alism", "al"}, {"iveness", "ive"}, {"fulness", "ful"}, {"ousness", "ous"}};
        rules(t);
        break;
      }
      case 't': { static const R t[] = {{"aliti", "al"}, {"iviti", "ive"}, {"biliti", "ble"}}; rules(t); break; }
      case 'g': { static const R t[] = {{"logi", "log"}}; rules(t); break; }
      default: break;
    }
  }

  void step3() {
    using R = std::pair<std::string_view, std::string_view>;
    switch (at(k_)) {
      case 'e': { static const R t[] = {{"icate", "ic"}, {"ative", ""}, {"alize", "al"}}; rules(t); break; }
      case 'i': { static const R t[] = {{"iciti", "ic"}}; rules(t); break; }
      case 'l': { static const R t[] = {{"ical", "ic"}, {"ful", ""}}; rules(t); break; }
      case 's': { static const R t[] = {{"ness", ""}}; rules(t); break; }
      default: break;
    }
  }

  void step4() {
    if (k_ < 1) return;
    bool matched = false;
    auto any = [&](std::initializer_list<std::string_view> suffixes) {
      for (auto s : suffixes) {
        if (ends(s)) return true;
      }
      return false;
    };
    switch (at(k_ - 1)) {
      case 'a': matched = any({"al"}); break;
      case 'c': matched = any({"ance", "ence"}); break;
      case 'e': matched = any({"er"}); break;
      case 'i': matched = any({"ic"}); break;
      case 'l': matched = any({"able", "ible"}); break;
      case 'n': matched = any({"ant", "ement", "ment", "ent"}); break;
      case 'o':
        if (ends("ion") && j_ >= 0 && (at(j_) == 's' || at(j_) == 't')) matched = true;
        else matched = ends("ou");
        break;
      case 's': matched = any({"ism"}); break;
      case 't': matched = any({"ate", "iti"}); break;
      case 'u': matched = any({"ous"}); break;
      case 'v': matched = any({"ive"}); break;
      case 'z': matched = any({"ize"}); break;
      default: break;
    }
    if (matched && m() > 1) k_ = j_;
  }

  void step5() {
    j_ = k_;
    if (at(k_) == 'e') {
      const int a = m();
      if (a > 1 || (a == 1 && !cvc(k_ - 1))) --k_;
    }
    if (at(k_) == 'l' && double_cons(k_) && m() > 1) --k_;
  }

  std::string b_;
  int k_;
  int j_ = 0;
};

bool is_lower_alpha(std::string_view w) {
  for (char c : w) {
    if (c < 'a' || c > 'z') return false;
  }
  return true;
}

}  // namespace

std::string porter_stem(std::string_view word) {
  if (word.size() <= 2 || !is_lower_alpha(word)) return std::string(word);
  return PorterStemmer(word).run();
}

}  // namespace apc
