#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "nbestgec/corpus_io.hpp"
#include "nbestgec/error.hpp"
#include "nbestgec/normalize.hpp"

namespace nbestgec {

namespace detail {

struct IdSeqHash {
  std::size_t operator()(const std::vector<std::uint32_t>& v) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (std::uint32_t x : v) {
      h ^= x;
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h ^ v.size());
  }
};

}  // namespace detail

struct NGramOptions {
  std::size_t order = 3;
  double k = 0.1;
};

// Word n-gram model with interpolated add-k smoothing:
//
//   P(w | h) = (c(h, w) + k|V| * P(w | h')) / (c(h) + k|V|)
//   P(w)     = (c(w) + k) / (N + k|V|)
//
// where h' drops the oldest word of h. V holds every training word plus
// </s> and <unk>; <s> only ever appears as context. Each conditional sums to
// one by construction, and <unk> always gets positive mass when k > 0.
class NGramModel {
 public:
  using Id = std::uint32_t;
  static constexpr Id unk_id = 0;
  static constexpr Id eos_id = 1;
  static constexpr Id bos_id = 2;
  static constexpr std::string_view unk_token = "<unk>";
  static constexpr std::string_view eos_token = "</s>";
  static constexpr std::string_view bos_token = "<s>";
  static constexpr int format_version = 1;

  using Options = NGramOptions;

  struct ContextCounts {
    std::uint64_t total = 0;
    std::unordered_map<Id, std::uint64_t> next;
  };

  static NGramModel train(const std::vector<TokenSeq>& sentences, Options opts = Options{}) {
    if (opts.order < 1) throw ConfigError("n-gram order must be at least 1");
    if (!(opts.k > 0.0) || !std::isfinite(opts.k)) throw ConfigError("add-k constant must be positive");
    const bool any = std::any_of(sentences.begin(), sentences.end(), [](const TokenSeq& s) { return !s.empty(); });
    if (!any) throw ValidationError("cannot train a language model on an empty corpus");

    NGramModel m(opts);
    for (const auto& s : sentences)
      for (const auto& tok : s) m.intern(tok);

    std::vector<Id> padded;
    for (const auto& s : sentences) {
      if (s.empty()) continue;
      padded.assign(opts.order - 1, bos_id);
      for (const auto& tok : s) padded.push_back(m.lookup(tok));
      padded.push_back(eos_id);
      for (std::size_t i = opts.order - 1; i < padded.size(); ++i) {
        for (std::size_t n = 0; n < opts.order; ++n) {
          std::vector<Id> ctx(padded.begin() + static_cast<std::ptrdiff_t>(i - n),
                              padded.begin() + static_cast<std::ptrdiff_t>(i));
          auto& cc = m.counts_[n][std::move(ctx)];
          ++cc.total;
          ++cc.next[padded[i]];
        }
      }
    }
    return m;
  }

  // Exactly uniform unigram over `words` plus </s> and <unk>.
  static NGramModel uniform(const std::vector<std::string>& words) {
    NGramModel m(Options{1, 1.0});
    for (const auto& w : words) m.intern(w);
    return m;
  }

  std::size_t order() const noexcept { return opts_.order; }
  double k() const noexcept { return opts_.k; }
  // |V|: predictable types, i.e. everything except <s>.
  std::size_t vocab_size() const noexcept { return words_.size() - 1; }
  const std::vector<std::string>& id_to_token() const noexcept { return words_; }

  Id lookup(std::string_view tok) const {
    auto it = ids_.find(std::string(tok));
    return it == ids_.end() ? unk_id : it->second;
  }

  // Ids a distribution ranges over.
  std::vector<Id> predictable_ids() const {
    std::vector<Id> out;
    for (Id i = 0; i < words_.size(); ++i)
      if (i != bos_id) out.push_back(i);
    return out;
  }

  // `context` is oldest-first; only its last order-1 ids are used.
  double prob(std::span<const Id> context, Id w) const {
    if (context.size() >= opts_.order) context = context.last(opts_.order - 1);
    const double kv = opts_.k * static_cast<double>(vocab_size());
    double p = 0.0;
    for (std::size_t n = 0; n <= context.size(); ++n) {
      const auto sub = context.last(n);
      const ContextCounts* cc = find(sub);
      const double total = cc ? static_cast<double>(cc->total) : 0.0;
      double c = 0.0;
      if (cc) {
        auto it = cc->next.find(w);
        if (it != cc->next.end()) c = static_cast<double>(it->second);
      }
      const double prior = n == 0 ? 1.0 / static_cast<double>(vocab_size()) : p;
      p = (c + kv * prior) / (total + kv);
    }
    return p;
  }

  // Natural-log probability of the sentence followed by </s>.
  double sentence_logprob(const TokenSeq& sentence) const {
    std::vector<Id> padded(opts_.order - 1, bos_id);
    for (const auto& tok : sentence) padded.push_back(lookup(tok));
    padded.push_back(eos_id);
    double lp = 0.0;
    for (std::size_t i = opts_.order - 1; i < padded.size(); ++i) {
      const std::span<const Id> ctx(padded.data() + i - (opts_.order - 1), opts_.order - 1);
      lp += std::log(prob(ctx, padded[i]));
    }
    return lp;
  }

  double perplexity(const TokenSeq& sentence) const {
    return std::exp(-sentence_logprob(sentence) / static_cast<double>(sentence.size() + 1));
  }

  // Every context with observed continuations, for normalization checks.
  std::vector<std::vector<Id>> stored_contexts() const {
    std::vector<std::vector<Id>> out;
    for (const auto& level : counts_)
      for (const auto& [ctx, cc] : level) out.push_back(ctx);
    std::sort(out.begin(), out.end());
    return out;
  }

  // -------------------------------------------------------------------------
  // Persistence: a JSON table of raw counts; probabilities are recomputed.

  Json to_json() const {
    Json j;
    j["format"] = "nbestgec.ngram";
    j["version"] = format_version;
    j["order"] = opts_.order;
    j["k"] = opts_.k;
    j["tokens"] = words_;
    Json rows = Json::array();
    for (const auto& ctx : stored_contexts()) {
      const ContextCounts& cc = *find(ctx);
      std::vector<std::pair<Id, std::uint64_t>> next(cc.next.begin(), cc.next.end());
      std::sort(next.begin(), next.end());
      Json row;
      row["context"] = ctx;
      row["next"] = next;
      rows.push_back(std::move(row));
    }
    j["counts"] = std::move(rows);
    return j;
  }

  static NGramModel from_json(const Json& j) {
    if (j.value("format", std::string{}) != "nbestgec.ngram") throw ValidationError("not an n-gram model file");
    if (j.value("version", 0) != format_version)
      throw ValidationError("unsupported n-gram model version " + std::to_string(j.value("version", 0)));
    NGramModel m(Options{j.at("order").get<std::size_t>(), j.at("k").get<double>()});
    const auto tokens = j.at("tokens").get<std::vector<std::string>>();
    if (tokens.size() < 3 || tokens[unk_id] != unk_token || tokens[eos_id] != eos_token || tokens[bos_id] != bos_token)
      throw ValidationError("model token table lacks the special tokens");
    for (std::size_t i = 3; i < tokens.size(); ++i) m.intern(tokens[i]);
    for (const auto& row : j.at("counts")) {
      auto ctx = row.at("context").get<std::vector<Id>>();
      if (ctx.size() >= m.opts_.order) throw ValidationError("context longer than model order");
      auto& cc = m.counts_[ctx.size()][ctx];
      for (const auto& [id, count] : row.at("next").get<std::vector<std::pair<Id, std::uint64_t>>>()) {
        if (id >= m.words_.size()) throw ValidationError("token id out of range");
        cc.next[id] = count;
        cc.total += count;
      }
    }
    return m;
  }

  void save(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << to_json().dump() << '\n';
  }

  static NGramModel load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    try {
      return from_json(Json::parse(in));
    } catch (const Json::exception& ex) {
      throw ValidationError(std::string("malformed model file: ") + ex.what());
    }
  }

 private:
  explicit NGramModel(Options opts) : opts_(opts), counts_(opts.order) {
    intern(std::string(unk_token));
    intern(std::string(eos_token));
    intern(std::string(bos_token));
  }

  Id intern(const std::string& tok) {
    auto [it, inserted] = ids_.try_emplace(tok, static_cast<Id>(words_.size()));
    if (inserted) words_.push_back(tok);
    return it->second;
  }

  const ContextCounts* find(std::span<const Id> ctx) const {
    const auto& level = counts_[ctx.size()];
    auto it = level.find(std::vector<Id>(ctx.begin(), ctx.end()));
    return it == level.end() ? nullptr : &it->second;
  }

  Options opts_;
  std::vector<std::string> words_;
  std::unordered_map<std::string, Id> ids_;
  // counts_[n] maps length-n contexts to their continuation counts.
  std::vector<std::unordered_map<std::vector<Id>, ContextCounts, detail::IdSeqHash>> counts_;
};

// ---------------------------------------------------------------------------
// Rescoring

struct RankedHypothesis {
  std::string text;
  std::size_t original_rank = 0;
  double perplexity = 0.0;
  double key = 0.0;  // ln(perplexity) - acoustic_weight * score
};

// Sorts ascending by perplexity (optionally mixed with the entry's acoustic
// scores); equal keys keep their original order.
inline std::vector<RankedHypothesis> rescore(const NBestEntry& entry, const NGramModel& m,
                                             const NormalizationPolicy& p = {}, double acoustic_weight = 0.0) {
  std::vector<RankedHypothesis> out;
  out.reserve(entry.size());
  for (std::size_t i = 0; i < entry.size(); ++i) {
    RankedHypothesis r;
    r.text = entry.hypotheses[i];
    r.original_rank = i + 1;
    r.perplexity = m.perplexity(normalize(r.text, p));
    r.key = std::log(r.perplexity);
    if (acoustic_weight != 0.0 && entry.scores) r.key -= acoustic_weight * (*entry.scores)[i];
    out.push_back(std::move(r));
  }
  std::stable_sort(out.begin(), out.end(), [](const RankedHypothesis& a, const RankedHypothesis& b) { return a.key < b.key; });
  return out;
}

// ---------------------------------------------------------------------------
// Rank-weighted N-best likelihood objective

struct WeightedObjectiveConfig {
  // Rank weights as used for fine-tuning: 0.1 on the best hypothesis, 0.05 on
  // the next three.
  std::vector<double> alphas{0.1, 0.05, 0.05, 0.05};

  void validate(std::size_t n) const {
    if (alphas.size() != n)
      throw ConfigError("objective weights: expected " + std::to_string(n) + " values, got " +
                        std::to_string(alphas.size()));
    bool positive = false;
    for (double a : alphas) {
      if (!(a >= 0.0) || !std::isfinite(a)) throw ConfigError("objective weights must be finite and non-negative");
      positive = positive || a > 0.0;
    }
    if (!positive) throw ConfigError("objective weights are all zero");
  }
};

// sum_i alpha_i * logprob_i, accumulated in rank order.
inline double weighted_nbest_objective(std::span<const double> logprobs, const WeightedObjectiveConfig& cfg) {
  cfg.validate(logprobs.size());
  double total = 0.0;
  for (std::size_t i = 0; i < logprobs.size(); ++i) total += cfg.alphas[i] * logprobs[i];
  return total;
}

inline double weighted_nbest_objective(const std::vector<double>& logprobs, const WeightedObjectiveConfig& cfg) {
  return weighted_nbest_objective(std::span<const double>(logprobs), cfg);
}

}  // namespace nbestgec
