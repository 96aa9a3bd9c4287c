#include <algorithm>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "apc/corpus.hpp"

namespace apc {
namespace {

// Decodes one UTF-8 sequence starting at s[i], advancing i. Malformed bytes
// decode to themselves as a single unit so the function stays total.
char32_t next_codepoint(std::string_view s, std::size_t& i, std::size_t& len) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  auto cont = [&](std::size_t k) -> int {
    if (i + k >= s.size()) return -1;
    const auto b = static_cast<unsigned char>(s[i + k]);
    return (b & 0xC0u) == 0x80u ? static_cast<int>(b & 0x3Fu) : -1;
  };
  if (b0 < 0x80) {
    len = 1;
    return b0;
  }
  int need = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0u) == 0xC0u) {
    need = 1;
    cp = b0 & 0x1Fu;
  } else if ((b0 & 0xF0u) == 0xE0u) {
    need = 2;
    cp = b0 & 0x0Fu;
  } else if ((b0 & 0xF8u) == 0xF0u) {
    need = 3;
    cp = b0 & 0x07u;
  } else {
    len = 1;
    return b0;
  }
  for (int k = 1; k <= need; ++k) {
    const int c = cont(static_cast<std::size_t>(k));
    if (c < 0) {
      len = 1;
      return b0;
    }
    cp = (cp << 6) | static_cast<char32_t>(c);
  }
  len = static_cast<std::size_t>(need) + 1;
  return cp;
}

bool is_space(char32_t c) {
  switch (c) {
    case U' ': case U'\t': case U'\n': case U'\r': case U'\v': case U'\f':
    case 0x00A0: case 0x1680: case 0x2028: case 0x2029: case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return c >= 0x2000 && c <= 0x200A;
  }
}

bool is_stripped_symbol(char32_t c) {
  static constexpr std::u32string_view kSymbols = U"!?.,'\"#$%&*()-_+=/\\:;@~";
  return kSymbols.find(c) != std::u32string_view::npos;
}

bool is_emoji(char32_t c) {
  return (c >= 0x1F000 && c <= 0x1FAFF) ||  // pictographs, emoticons, flags, symbols
         (c >= 0x2600 && c <= 0x27BF) ||    // misc symbols, dingbats
         (c >= 0x2B00 && c <= 0x2BFF) ||    // arrows and stars
         (c >= 0xFE00 && c <= 0xFE0F) ||    // variation selectors
         (c >= 0xE0020 && c <= 0xE007F) ||  // tag sequences
         c == 0x200D || c == 0x20E3;        // ZWJ, keycap
}

enum class CharClass { kKeep, kDrop, kSeparator };

CharClass classify(char32_t c) {
  if (c == U'\'') return CharClass::kDrop;
  if (is_space(c) || is_stripped_symbol(c)) return CharClass::kSeparator;
  if (is_emoji(c)) return CharClass::kSeparator;
  return CharClass::kKeep;
}

char lower_ascii(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

}  // namespace

std::string normalize_title(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  std::size_t i = 0;
  while (i < raw.size()) {
    std::size_t len = 1;
    const char32_t c = next_codepoint(raw, i, len);
    if (!is_space(c) && !is_stripped_symbol(c) && !is_emoji(c)) {
      if (len == 1) out.push_back(lower_ascii(raw[i]));
      else out.append(raw.substr(i, len));
    }
    i += len;
  }
  return out;
}

std::vector<std::string> tokenize_title(std::string_view raw) {
  std::vector<std::string> tokens;
  std::string current;
  std::size_t i = 0;
  while (i < raw.size()) {
    std::size_t len = 1;
    const char32_t c = next_codepoint(raw, i, len);
    switch (classify(c)) {
      case CharClass::kKeep:
        if (len == 1) current.push_back(lower_ascii(raw[i]));
        else current.append(raw.substr(i, len));
        break;
      case CharClass::kDrop:
        break;
      case CharClass::kSeparator:
        if (!current.empty()) tokens.push_back(std::move(current));
        current.clear();
        break;
    }
    i += len;
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::vector<std::string> title_terms(std::string_view raw) {
  std::vector<std::string> terms;
  for (const auto& token : tokenize_title(raw)) terms.push_back(porter_stem(token));
  std::ranges::sort(terms);
  terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
  return terms;
}

}  // namespace apc
