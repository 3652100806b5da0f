#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "nbestgec/corpus_io.hpp"
#include "nbestgec/edit_distance.hpp"
#include "nbestgec/error.hpp"
#include "nbestgec/normalize.hpp"
#include "nbestgec/parallel.hpp"

namespace nbestgec {

struct WerBreakdown {
  double wer = 0.0;
  std::size_t substitutions = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;
  std::size_t ref_len = 0;

  std::size_t errors() const noexcept { return substitutions + deletions + insertions; }

  // Sums raw counts; wer is recomputed from the totals (sclite convention),
  // never averaged.
  WerBreakdown& operator+=(const WerBreakdown& o) noexcept {
    substitutions += o.substitutions;
    deletions += o.deletions;
    insertions += o.insertions;
    ref_len += o.ref_len;
    wer = ref_len ? static_cast<double>(errors()) / static_cast<double>(ref_len) : 0.0;
    return *this;
  }
};

inline WerBreakdown breakdown(const Alignment& a) {
  WerBreakdown w;
  w.substitutions = a.counts.substitutions;
  w.deletions = a.counts.deletions;
  w.insertions = a.counts.insertions;
  w.ref_len = a.ref_len;
  if (a.ref_len == 0 && a.hyp_len > 0)
    throw ValidationError("WER is undefined for an empty reference with a non-empty hypothesis");
  w.wer = a.ref_len ? static_cast<double>(w.errors()) / static_cast<double>(a.ref_len) : 0.0;
  return w;
}

inline WerBreakdown wer(const TokenSeq& ref, const TokenSeq& hyp) { return breakdown(align(ref, hyp)); }

inline WerBreakdown wer(std::string_view ref, std::string_view hyp, const NormalizationPolicy& p) {
  return wer(normalize(ref, p), normalize(hyp, p));
}

// Per-entry score row, the unit persisted between scoring and reporting.
struct ScoreRow {
  std::string id;
  std::string test_set;
  std::string method;
  std::size_t substitutions = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;
  std::size_t ref_len = 0;

  std::size_t errors() const noexcept { return substitutions + deletions + insertions; }

  WerBreakdown as_breakdown() const {
    WerBreakdown w;
    w.substitutions = substitutions;
    w.deletions = deletions;
    w.insertions = insertions;
    w.ref_len = ref_len;
    w.wer = ref_len ? static_cast<double>(errors()) / static_cast<double>(ref_len) : 0.0;
    return w;
  }

  Json to_json() const {
    Json j;
    j["id"] = id;
    j["test_set"] = test_set;
    j["method"] = method;
    j["substitutions"] = substitutions;
    j["deletions"] = deletions;
    j["insertions"] = insertions;
    j["ref_len"] = ref_len;
    return j;
  }

  static ScoreRow from_json(const Json& j) {
    ScoreRow r;
    r.id = j.at("id").get<std::string>();
    r.test_set = j.value("test_set", std::string{});
    r.method = j.value("method", std::string{});
    r.substitutions = j.at("substitutions").get<std::size_t>();
    r.deletions = j.at("deletions").get<std::size_t>();
    r.insertions = j.at("insertions").get<std::size_t>();
    r.ref_len = j.at("ref_len").get<std::size_t>();
    return r;
  }

  friend bool operator==(const ScoreRow&, const ScoreRow&) = default;
};

struct CorpusWer {
  WerBreakdown aggregate;
  std::vector<ScoreRow> rows;
  std::size_t skipped = 0;  // entries with fewer than `rank` hypotheses
};

// Scores one text per entry, supplied by pick(entry) (nullptr = skip).
template <typename Pick>
CorpusWer score_corpus(const Corpus& c, const NormalizationPolicy& p, Pick&& pick, std::size_t workers = 1) {
  std::vector<std::optional<WerBreakdown>> per(c.size());
  parallel_for(c.size(), workers, [&](std::size_t i) {
    const NBestEntry& e = c[i];
    const std::string* hyp = pick(e);
    if (!hyp) return;
    try {
      per[i] = wer(e.reference, *hyp, p);
    } catch (const ValidationError& ex) {
      throw ValidationError("entry '" + e.id + "': " + ex.what());
    }
  });

  CorpusWer out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!per[i]) {
      ++out.skipped;
      continue;
    }
    const WerBreakdown& w = *per[i];
    out.aggregate += w;
    out.rows.push_back({c[i].id, "", "", w.substitutions, w.deletions, w.insertions, w.ref_len});
  }
  return out;
}

// Corpus WER of the rank-th hypothesis (1-based): total errors over total
// reference tokens.
inline CorpusWer batch_wer(const Corpus& c, const NormalizationPolicy& p = {}, std::size_t rank = 1,
                           std::size_t workers = 1) {
  if (rank == 0) throw ValidationError("hypothesis rank is 1-based");
  return score_corpus(
      c, p, [rank](const NBestEntry& e) { return rank <= e.size() ? &e.hypotheses[rank - 1] : nullptr; },
      workers);
}

}  // namespace nbestgec
