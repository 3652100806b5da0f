#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "nbestgec/corpus_io.hpp"
#include "nbestgec/edit_distance.hpp"
#include "nbestgec/error.hpp"
#include "nbestgec/normalize.hpp"

namespace nbestgec {

// An arc with an empty token is epsilon (normalized tokens are never empty).
struct Arc {
  std::string token;
  std::size_t rank;  // 1-based rank of the hypothesis that contributed it

  bool epsilon() const noexcept { return token.empty(); }
  friend bool operator==(const Arc&, const Arc&) = default;
};

// Slotted alignment of an N-best list. Every slot holds exactly one arc per
// hypothesis, ordered by rank, so hypothesis r is read back by taking arc
// r-1 of each slot and dropping epsilons.
struct ConfusionNetwork {
  std::vector<std::vector<Arc>> slots;
  std::size_t hypothesis_count = 0;
  std::size_t pivot_rank = 1;

  std::size_t size() const noexcept { return slots.size(); }

  TokenSeq path(std::size_t rank) const {
    TokenSeq out;
    for (const auto& slot : slots) {
      const Arc& a = slot.at(rank - 1);
      if (!a.epsilon()) out.push_back(a.token);
    }
    return out;
  }

  // Distinct tokens of a slot; epsilon shows up as "".
  std::vector<std::string> alternatives(std::size_t s) const {
    std::vector<std::string> out;
    for (const auto& a : slots[s]) out.push_back(a.token);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  bool has_epsilon(std::size_t s) const {
    return std::any_of(slots[s].begin(), slots[s].end(), [](const Arc& a) { return a.epsilon(); });
  }

  bool contains(std::size_t s, const std::string& token) const {
    return std::any_of(slots[s].begin(), slots[s].end(), [&](const Arc& a) { return a.token == token; });
  }
};

// Incremental pivot alignment: the rank-1 list seeds one slot per token,
// then each further hypothesis is aligned to the network so far. A slot
// matches a token for free if any arc already carries it; skipping a slot is
// free if it already holds epsilon.
inline ConfusionNetwork build_cn(const std::vector<TokenSeq>& hyps) {
  if (hyps.empty()) throw ValidationError("confusion network needs at least one hypothesis");
  ConfusionNetwork cn;
  cn.hypothesis_count = hyps.size();
  for (const auto& tok : hyps[0]) cn.slots.push_back({Arc{tok, 1}});

  for (std::size_t k = 1; k < hyps.size(); ++k) {
    const TokenSeq& h = hyps[k];
    const std::size_t rank = k + 1;
    const Alignment a = align_with_costs(
        cn.size(), h.size(), [&](std::size_t s, std::size_t j) { return cn.contains(s, h[j]) ? 0 : 1; },
        [&](std::size_t s) { return cn.has_epsilon(s) ? 0 : 1; }, [](std::size_t) { return 1; });

    std::vector<std::vector<Arc>> next;
    next.reserve(a.ops.size());
    for (const EditOp& op : a.ops) {
      switch (op.kind) {
        case EditKind::correct:
        case EditKind::substitute:
          next.push_back(std::move(cn.slots[op.ref_index]));
          next.back().push_back({h[op.hyp_index], rank});
          break;
        case EditKind::remove:
          next.push_back(std::move(cn.slots[op.ref_index]));
          next.back().push_back({std::string{}, rank});
          break;
        case EditKind::insert: {
          std::vector<Arc> slot;
          for (std::size_t r = 1; r < rank; ++r) slot.push_back({std::string{}, r});
          slot.push_back({h[op.hyp_index], rank});
          next.push_back(std::move(slot));
          break;
        }
      }
    }
    cn.slots = std::move(next);
  }
  return cn;
}

inline ConfusionNetwork build_cn(const NBestEntry& entry, const NormalizationPolicy& p = {}) {
  std::vector<TokenSeq> hyps;
  hyps.reserve(entry.size());
  for (const auto& h : entry.hypotheses) hyps.push_back(normalize(h, p));
  return build_cn(hyps);
}

// Rank vote weights; ranks past the end of `weights` reuse the last value.
struct VoteConfig {
  std::vector<double> weights{1.0, 0.5, 0.5, 0.5, 0.5};
  double epsilon_penalty = 1.0;

  void validate() const {
    if (weights.empty()) throw ConfigError("vote weights are empty");
    bool positive = false;
    for (double w : weights) {
      if (!(w >= 0.0) || !std::isfinite(w)) throw ConfigError("vote weights must be finite and non-negative");
      positive = positive || w > 0.0;
    }
    if (!positive) throw ConfigError("at least one vote weight must be positive");
    if (!(epsilon_penalty >= 0.0 && epsilon_penalty <= 1.0)) throw ConfigError("epsilon penalty must lie in [0, 1]");
  }

  double weight(std::size_t rank) const {
    return rank <= weights.size() ? weights[rank - 1] : weights.back();
  }
};

// Summed vote per distinct slot token ("" = epsilon, already scaled by the
// epsilon penalty).
inline std::map<std::string, double> tally(const ConfusionNetwork& cn, std::size_t s, const VoteConfig& cfg) {
  std::map<std::string, double> votes;
  for (const Arc& a : cn.slots[s]) {
    const double w = cfg.weight(a.rank) * (a.epsilon() ? cfg.epsilon_penalty : 1.0);
    votes[a.token] += w;
  }
  return votes;
}

// Per slot, the heaviest arc wins. Ties (within 1e-12 relative) go to the
// pivot's arc, then to the lexicographically smallest token, epsilon first.
inline TokenSeq rover_vote(const ConfusionNetwork& cn, const VoteConfig& cfg = {}) {
  cfg.validate();
  TokenSeq out;
  for (std::size_t s = 0; s < cn.size(); ++s) {
    const auto votes = tally(cn, s, cfg);
    double best = 0.0;
    for (const auto& [tok, w] : votes) best = std::max(best, w);
    const double tol = 1e-12 * std::max(1.0, best);

    const std::string& pivot = cn.slots[s][cn.pivot_rank - 1].token;
    const std::string* winner = nullptr;
    if (best - votes.at(pivot) <= tol) {
      winner = &pivot;
    } else {
      for (const auto& [tok, w] : votes) {
        if (best - w <= tol) {
          winner = &tok;
          break;
        }
      }
    }
    if (!winner->empty()) out.push_back(*winner);
  }
  return out;
}

}  // namespace nbestgec
