#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "nbestgec/corpus_io.hpp"
#include "nbestgec/edit_distance.hpp"
#include "nbestgec/normalize.hpp"

namespace nbestgec {

// A probability together with the counts it was computed from.
struct Proportion {
  std::size_t hits = 0;
  std::size_t support = 0;

  double value() const noexcept {
    return support ? static_cast<double>(hits) / static_cast<double>(support) : 0.0;
  }

  Proportion& operator+=(const Proportion& o) noexcept {
    hits += o.hits;
    support += o.support;
    return *this;
  }
};

// Case (i): the rank-k hypothesis beats rank 1 on WER.
enum class BetterCandidateRule { strict, non_strict };
// Case (ii): an erroneous rank-1 reference position is recovered by rank k,
// either at the aligned position or anywhere in the hypothesis.
enum class RecoveryRule { positional, bag };

struct CaseIResult {
  Proportion p;
  std::size_t skipped = 0;  // entries with fewer than k hypotheses
};

struct CaseIIResult {
  Proportion p;
  std::size_t skipped = 0;
};

namespace detail {

struct NormalizedEntry {
  TokenSeq ref;
  std::vector<TokenSeq> hyps;
};

inline NormalizedEntry normalized(const NBestEntry& e, const NormalizationPolicy& p) {
  NormalizedEntry n{normalize(e.reference, p), {}};
  for (const auto& h : e.hypotheses) n.hyps.push_back(normalize(h, p));
  return n;
}

// Per-entry contribution, usable for both whole-corpus counts and the
// weighted-mean identity in tests.
inline Proportion case_ii_entry(const TokenSeq& ref, const TokenSeq& hyp1, const TokenSeq& hypk, RecoveryRule rule) {
  const Alignment a1 = align(ref, hyp1);
  std::vector<std::size_t> wrong;
  for (const auto& op : a1.ops)
    if (op.kind == EditKind::substitute || op.kind == EditKind::remove) wrong.push_back(op.ref_index);
  Proportion out;
  out.support = wrong.size();
  if (wrong.empty()) return out;

  if (rule == RecoveryRule::positional) {
    std::vector<bool> correct(ref.size(), false);
    for (const auto& op : align(ref, hypk).ops)
      if (op.kind == EditKind::correct) correct[op.ref_index] = true;
    for (std::size_t i : wrong) out.hits += correct[i] ? 1 : 0;
  } else {
    const std::unordered_set<std::string> bag(hypk.begin(), hypk.end());
    for (std::size_t i : wrong) out.hits += bag.contains(ref[i]) ? 1 : 0;
  }
  return out;
}

}  // namespace detail

inline CaseIResult case_i_probability(const Corpus& c, std::size_t k, const NormalizationPolicy& p = {},
                                      BetterCandidateRule rule = BetterCandidateRule::strict) {
  CaseIResult r;
  for (const auto& e : c) {
    if (e.size() < k || k < 2) {
      ++r.skipped;
      continue;
    }
    const TokenSeq ref = normalize(e.reference, p);
    const std::size_t e1 = edit_distance(ref, normalize(e.hypotheses[0], p));
    const std::size_t ek = edit_distance(ref, normalize(e.hypotheses[k - 1], p));
    ++r.p.support;
    if (rule == BetterCandidateRule::strict ? ek < e1 : ek <= e1) ++r.p.hits;
  }
  return r;
}

inline Proportion case_ii_entry(const NBestEntry& e, std::size_t k, const NormalizationPolicy& p = {},
                                RecoveryRule rule = RecoveryRule::positional) {
  if (e.size() < k || k < 2) return {};
  return detail::case_ii_entry(normalize(e.reference, p), normalize(e.hypotheses[0], p),
                               normalize(e.hypotheses[k - 1], p), rule);
}

// Only entries whose rank-1 alignment has a substitution or deletion
// contribute; insertions have no reference token to recover.
inline CaseIIResult case_ii_probability(const Corpus& c, std::size_t k, const NormalizationPolicy& p = {},
                                        RecoveryRule rule = RecoveryRule::positional) {
  CaseIIResult r;
  for (const auto& e : c) {
    if (e.size() < k || k < 2) {
      ++r.skipped;
      continue;
    }
    r.p += case_ii_entry(e, k, p, rule);
  }
  return r;
}

struct RankStatsRow {
  std::size_t rank = 0;
  Proportion case_i;
  Proportion case_ii;
  std::size_t skipped = 0;
};

// Rank table for ranks [first, last]; each row uses only entries that have
// a hypothesis at that rank.
inline std::vector<RankStatsRow> rank_stats(const Corpus& c, std::size_t first, std::size_t last,
                                            const NormalizationPolicy& p = {},
                                            BetterCandidateRule r1 = BetterCandidateRule::strict,
                                            RecoveryRule r2 = RecoveryRule::positional) {
  first = std::max<std::size_t>(first, 2);
  std::vector<RankStatsRow> rows;
  for (std::size_t k = first; k <= last; ++k) rows.push_back({k, {}, {}, 0});
  if (rows.empty()) return rows;

  for (const auto& e : c) {
    const auto n = detail::normalized(e, p);
    const std::size_t e1 = edit_distance(n.ref, n.hyps[0]);
    for (auto& row : rows) {
      if (n.hyps.size() < row.rank) {
        ++row.skipped;
        continue;
      }
      const TokenSeq& hk = n.hyps[row.rank - 1];
      const std::size_t ek = edit_distance(n.ref, hk);
      ++row.case_i.support;
      if (r1 == BetterCandidateRule::strict ? ek < e1 : ek <= e1) ++row.case_i.hits;
      row.case_ii += detail::case_ii_entry(n.ref, n.hyps[0], hk, r2);
    }
  }
  return rows;
}

enum class Side { references, hypotheses };

// Descending by count, ties broken lexicographically.
inline std::vector<std::pair<std::string, std::size_t>> word_frequency(const Corpus& c, Side side, std::size_t top,
                                                                       const NormalizationPolicy& p = {}) {
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& e : c) {
    if (side == Side::references) {
      for (auto& t : normalize(e.reference, p)) ++counts[std::move(t)];
    } else {
      for (const auto& h : e.hypotheses)
        for (auto& t : normalize(h, p)) ++counts[std::move(t)];
    }
  }
  std::vector<std::pair<std::string, std::size_t>> out(counts.begin(), counts.end());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  if (out.size() > top) out.resize(top);
  return out;
}

struct Diversity {
  std::size_t distinct = 0;
  double mean_pairwise_distance = 0.0;  // edit distance / longer length, over unordered pairs
};

inline Diversity diversity(const NBestEntry& e, const NormalizationPolicy& p = {}) {
  std::vector<TokenSeq> hyps;
  for (const auto& h : e.hypotheses) hyps.push_back(normalize(h, p));
  Diversity d;
  std::vector<TokenSeq> uniq = hyps;
  std::sort(uniq.begin(), uniq.end());
  d.distinct = static_cast<std::size_t>(std::unique(uniq.begin(), uniq.end()) - uniq.begin());

  double sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    for (std::size_t j = i + 1; j < hyps.size(); ++j) {
      const std::size_t longest = std::max(hyps[i].size(), hyps[j].size());
      if (longest > 0) sum += static_cast<double>(edit_distance(hyps[i], hyps[j])) / static_cast<double>(longest);
      ++pairs;
    }
  }
  d.mean_pairwise_distance = pairs ? sum / static_cast<double>(pairs) : 0.0;
  return d;
}

}  // namespace nbestgec
