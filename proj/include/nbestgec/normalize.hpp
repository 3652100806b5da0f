#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace nbestgec {

using TokenSeq = std::vector<std::string>;

// Scoring-side text normalization. Defaults follow the usual sclite setup:
// case-folded, punctuation removed, words split on whitespace runs.
struct NormalizationPolicy {
  bool lowercase = true;
  // Drops ASCII punctuation. Apostrophes between two word characters survive
  // ("china's"); with apostrophe_split, so does a token-initial apostrophe
  // that starts a clitic ("'s").
  bool strip_punctuation = true;
  // Only affects normalize_text(); tokens never contain whitespace.
  bool collapse_whitespace = true;
  // "china's" -> "china" "'s"
  bool apostrophe_split = false;
  // Every non-space UTF-8 code point becomes its own token (CER scoring).
  bool char_level = false;

  static NormalizationPolicy raw() {
    NormalizationPolicy p;
    p.lowercase = false;
    p.strip_punctuation = false;
    return p;
  }

  friend bool operator==(const NormalizationPolicy&, const NormalizationPolicy&) = default;
};

namespace detail {

inline bool is_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

// Bytes >= 0x80 belong to multi-byte UTF-8 sequences; treat them as letters.
inline bool is_word_char(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80;
}

inline bool is_punct(unsigned char c) {
  return c < 0x80 && !is_word_char(c) && !is_space(c) && c > 0x20 && c != 0x7f;
}

inline char ascii_lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

inline std::size_t utf8_length(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead >> 5) == 0x6) return 2;
  if ((lead >> 4) == 0xe) return 3;
  if ((lead >> 3) == 0x1e) return 4;
  return 1;  // stray continuation byte; keep it as a unit
}

inline std::string clean_word(std::string_view word, const NormalizationPolicy& p) {
  std::string out;
  out.reserve(word.size());
  for (std::size_t i = 0; i < word.size(); ++i) {
    char c = word[i];
    const auto uc = static_cast<unsigned char>(c);
    if (p.strip_punctuation && is_punct(uc)) {
      if (c != '\'') continue;
      const bool next_word = i + 1 < word.size() && is_word_char(static_cast<unsigned char>(word[i + 1]));
      if (!next_word) continue;
      const bool prev_word = !out.empty() && is_word_char(static_cast<unsigned char>(out.back()));
      const bool clitic_start = p.apostrophe_split && out.empty();
      if (!prev_word && !clitic_start) continue;
    }
    out.push_back(p.lowercase ? ascii_lower(c) : c);
  }
  return out;
}

inline void split_apostrophes(std::string word, TokenSeq& out) {
  std::size_t start = 0;
  for (std::size_t i = 1; i < word.size(); ++i) {
    if (word[i] == '\'' && is_word_char(static_cast<unsigned char>(word[i - 1]))) {
      out.push_back(word.substr(start, i - start));
      start = i;
    }
  }
  out.push_back(word.substr(start));
}

}  // namespace detail

inline TokenSeq normalize(std::string_view text, const NormalizationPolicy& p = {}) {
  TokenSeq tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && detail::is_space(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !detail::is_space(static_cast<unsigned char>(text[j]))) ++j;
    if (j == i) break;
    std::string word = detail::clean_word(text.substr(i, j - i), p);
    i = j;
    if (word.empty()) continue;
    if (p.char_level) {
      for (std::size_t k = 0; k < word.size();) {
        const std::size_t len = std::min(detail::utf8_length(static_cast<unsigned char>(word[k])), word.size() - k);
        tokens.push_back(word.substr(k, len));
        k += len;
      }
    } else if (p.apostrophe_split) {
      detail::split_apostrophes(std::move(word), tokens);
    } else {
      tokens.push_back(std::move(word));
    }
  }
  return tokens;
}

inline std::string join(const TokenSeq& tokens, std::string_view sep = " ") {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += sep;
    out += tokens[i];
  }
  return out;
}

// Normalized text as a string. Without collapse_whitespace the original
// spacing between surviving words is kept verbatim.
inline std::string normalize_text(std::string_view text, const NormalizationPolicy& p = {}) {
  if (p.collapse_whitespace || p.char_level || p.apostrophe_split) return join(normalize(text, p));
  std::string out;
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t j = i;
    while (j < text.size() && detail::is_space(static_cast<unsigned char>(text[j]))) ++j;
    const std::string_view gap = text.substr(i, j - i);
    i = j;
    while (j < text.size() && !detail::is_space(static_cast<unsigned char>(text[j]))) ++j;
    if (j == i) break;
    std::string word = detail::clean_word(text.substr(i, j - i), p);
    i = j;
    if (word.empty()) continue;
    if (!out.empty()) out += gap;
    out += word;
  }
  return out;
}

}  // namespace nbestgec
