#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "nbestgec/corpus_io.hpp"
#include "nbestgec/error.hpp"
#include "nbestgec/normalize.hpp"

namespace nbestgec {

struct ChatMessage {
  std::string role;  // "user" | "assistant" | "system"
  std::string content;

  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

using Conversation = std::vector<ChatMessage>;

enum class PromptKind { zero_shot_tap, few_shot_tap, instruction };

inline const char* to_string(PromptKind k) {
  switch (k) {
    case PromptKind::zero_shot_tap: return "tap0";
    case PromptKind::few_shot_tap: return "tapN";
    case PromptKind::instruction: return "instruction";
  }
  return "instruction";
}

inline PromptKind prompt_kind_from_string(std::string_view s) {
  if (s == "tap0") return PromptKind::zero_shot_tap;
  if (s == "tapN") return PromptKind::few_shot_tap;
  if (s == "instruction") return PromptKind::instruction;
  throw ConfigError("unknown prompt template '" + std::string(s) + "' (expected instruction, tap0 or tapN)");
}

// Placeholders understood by render():
//   {domain} {n} {test_hypotheses} {best_hypothesis} {other_hypotheses}
//   {demonstrations}   -- expands demo_block once per demonstration
// and inside demo_block:
//   {demo_n} {demo_hypotheses} {demo_reference}
struct PromptTemplate {
  PromptKind kind = PromptKind::instruction;
  std::vector<ChatMessage> turns;
  std::string demo_block;

  static PromptTemplate builtin(PromptKind kind);

  // Throws ConfigError on unknown placeholders or unbalanced braces.
  void validate() const;
};

namespace prompt_text {

inline constexpr std::string_view q_asr = "Are you familiar with speech recognition?";
inline constexpr std::string_view r_asr =
    "Yes, I am familiar with speech recognition. Speech recognition, also known as automatic speech recognition "
    "(ASR) or speech-to-text, is the process of converting spoken language into text. This technology involves "
    "using algorithms and machine learning models to analyze and transcribe the acoustic features of spoken words "
    "and phrases. Speech recognition has many applications, including voice-controlled assistants, automated phone "
    "systems, and transcription services.";
inline constexpr std::string_view q_rescoring = "Are you familiar with language model rescoring in ASR?";
inline constexpr std::string_view r_rescoring =
    "Yes, I am familiar with language model rescoring for speech recognition. Language model rescoring is a "
    "technique used to improve the accuracy of speech recognition systems. It involves using a separate language "
    "model to evaluate the likelihood of a given hypothese list. This separate model is typically more complex and "
    "powerful than the initial language model used for the transcription, and it is used to re-score the "
    "transcription based on the probability of the words occurring in the given context. The rescoring process "
    "involves taking the output of the initial language model, which is usually based on statistical methods such "
    "as Hidden Markov Models, and then applying a more advanced language model, such as a neural network-based "
    "language model, to generate a more accurate transcription. This is accomplished by re-ranking the possible "
    "transcriptions based on the probabilities assigned by the more advanced language model. Language model "
    "rescoring has been shown to significantly improve the accuracy of speech recognition systems, particularly in "
    "noisy or challenging environments where the initial language model may not perform well.";
inline constexpr std::string_view q_example = "Can you give a possible example on language model rescoring with 5-best hypotheses?";
inline constexpr std::string_view r_example =
    "Sure, here is an example of language model rescoring for ASR with 5-best hypotheses:\n"
    "1. I want to go to the store.\n"
    "2. I want to go to the storm.\n"
    "3. I want to go to the stove.\n"
    "4. I want to go to the star.\n"
    "5. I want to go to the storage.\n"
    "After rescoring, I think the ground-truth of this speech should be: I want to go to the store.";
inline constexpr std::string_view q_few_shot =
    "Nice job, i will give you a real example as a demonstration from {domain}. {demonstrations}Following this "
    "example, can you report the true transcription from the following {n}-best hypotheses:? {test_hypotheses}";
inline constexpr std::string_view demo_block =
    "The {demo_n}-best hypothesis is:{demo_hypotheses}, and I expect your output is: {demo_reference}. ";
inline constexpr std::string_view q_zero_shot =
    "Nice job, can you report the true transcription from the following {n}-best hypotheses:? {test_hypotheses}";
inline constexpr std::string_view instruction =
    "Below is a best-hypotheses that is transcribed from an automatic speech recognition system. Write a response "
    "to predict the true transcription using the tokens from other-hypotheses.### best-hypothesis:{best_hypothesis}"
    "### other-hypothesis:{other_hypotheses} ###Response:";

}  // namespace prompt_text

inline PromptTemplate PromptTemplate::builtin(PromptKind kind) {
  namespace text = prompt_text;
  PromptTemplate t;
  t.kind = kind;
  if (kind == PromptKind::instruction) {
    t.turns = {{"user", std::string(text::instruction)}};
    return t;
  }
  t.turns = {
      {"user", std::string(text::q_asr)},       {"assistant", std::string(text::r_asr)},
      {"user", std::string(text::q_rescoring)}, {"assistant", std::string(text::r_rescoring)},
      {"user", std::string(text::q_example)},   {"assistant", std::string(text::r_example)},
  };
  if (kind == PromptKind::few_shot_tap) {
    t.turns.push_back({"user", std::string(text::q_few_shot)});
    t.demo_block = std::string(text::demo_block);
  } else {
    t.turns.push_back({"user", std::string(text::q_zero_shot)});
  }
  return t;
}

namespace detail {

inline const std::vector<std::string_view>& known_placeholders() {
  static const std::vector<std::string_view> names{
      "domain", "n", "test_hypotheses", "best_hypothesis", "other_hypotheses", "demonstrations",
      "demo_n", "demo_hypotheses", "demo_reference"};
  return names;
}

// Single left-to-right pass, so substituted values are never re-expanded.
inline std::string substitute(std::string_view text, const std::map<std::string, std::string, std::less<>>& vars) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == '{') {
      const std::size_t close = text.find('}', i + 1);
      if (close == std::string_view::npos) throw ConfigError("unbalanced '{' in prompt template");
      const std::string_view name = text.substr(i + 1, close - i - 1);
      auto it = vars.find(name);
      if (it == vars.end()) throw ConfigError("unbound prompt placeholder {" + std::string(name) + "}");
      out += it->second;
      i = close + 1;
    } else {
      out += text[i++];
    }
  }
  return out;
}

// "1. first; 2. second; ..."
inline std::string enumerate(const std::vector<std::string>& hyps, std::size_t from = 0) {
  std::string out;
  for (std::size_t i = from; i < hyps.size(); ++i) {
    if (i > from) out += "; ";
    out += std::to_string(i - from + 1) + ". " + hyps[i];
  }
  return out;
}

inline std::string join_plain(const std::vector<std::string>& hyps, std::size_t from) {
  std::string out;
  for (std::size_t i = from; i < hyps.size(); ++i) {
    if (i > from) out += "; ";
    out += hyps[i];
  }
  return out;
}

}  // namespace detail

inline void PromptTemplate::validate() const {
  std::map<std::string, std::string, std::less<>> vars;
  for (auto name : detail::known_placeholders()) vars.emplace(std::string(name), "");
  for (const auto& t : turns) {
    if (t.role != "user" && t.role != "assistant" && t.role != "system")
      throw ConfigError("unknown chat role '" + t.role + "'");
    detail::substitute(t.content, vars);
  }
  detail::substitute(demo_block, vars);
  if (kind == PromptKind::instruction && turns.size() != 1) throw ConfigError("instruction prompts have exactly one turn");
  if (turns.empty() || turns.back().role != "user") throw ConfigError("a prompt must end with a user turn");
}

// Fills the template for one test entry. Hypotheses are passed through raw;
// scoring normalizes later.
inline Conversation render_prompt(const PromptTemplate& t, const NBestEntry& entry,
                                  const std::vector<NBestEntry>& demos, std::size_t n_shot) {
  if (n_shot != demos.size())
    throw ConfigError("n_shot is " + std::to_string(n_shot) + " but " + std::to_string(demos.size()) +
                      " demonstrations were given");
  if (entry.hypotheses.empty()) throw ValidationError("entry '" + entry.id + "' has no hypotheses");
  if (t.kind != PromptKind::few_shot_tap && n_shot != 0)
    throw ConfigError(std::string("template '") + to_string(t.kind) + "' takes no demonstrations");
  if (t.kind == PromptKind::few_shot_tap && n_shot == 0)
    throw ConfigError("few-shot template needs at least one demonstration");

  std::string demo_text;
  for (const auto& d : demos) {
    demo_text += detail::substitute(t.demo_block, {{"demo_n", std::to_string(d.size())},
                                                   {"demo_hypotheses", detail::enumerate(d.hypotheses)},
                                                   {"demo_reference", d.reference}});
  }
  const std::map<std::string, std::string, std::less<>> vars{
      {"domain", entry.domain},
      {"n", std::to_string(entry.size())},
      {"test_hypotheses", detail::enumerate(entry.hypotheses)},
      {"best_hypothesis", entry.hypotheses.front()},
      {"other_hypotheses", detail::join_plain(entry.hypotheses, 1)},
      {"demonstrations", demo_text},
      // only reachable from demo_block
      {"demo_n", ""},
      {"demo_hypotheses", ""},
      {"demo_reference", ""},
  };
  Conversation out;
  out.reserve(t.turns.size());
  for (const auto& turn : t.turns) out.push_back({turn.role, detail::substitute(turn.content, vars)});
  return out;
}

// Human-readable dump used for golden files and audit logs.
inline std::string transcript(const Conversation& conv) {
  std::string out;
  for (const auto& m : conv) out += "[" + m.role + "]\n" + m.content + "\n\n";
  return out;
}

// Few-shot demonstrations: longest normalized reference first, ties by id.
inline std::vector<NBestEntry> select_demonstrations(const std::vector<NBestEntry>& pool, std::size_t n,
                                                     const NormalizationPolicy& p = {}) {
  std::vector<std::pair<std::size_t, const NBestEntry*>> ranked;
  for (const auto& e : pool) ranked.emplace_back(normalize(e.reference, p).size(), &e);
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second->id < b.second->id;
  });
  if (ranked.size() < n)
    throw ConfigError("demonstration pool has " + std::to_string(ranked.size()) + " entries, need " + std::to_string(n));
  std::vector<NBestEntry> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(*ranked[i].second);
  return out;
}

}  // namespace nbestgec
