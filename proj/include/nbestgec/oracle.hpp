#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <string>
#include <unordered_set>
#include <vector>

#include "nbestgec/alignment.hpp"
#include "nbestgec/confnet.hpp"
#include "nbestgec/corpus_io.hpp"
#include "nbestgec/parallel.hpp"

namespace nbestgec {

struct NBestOracle {
  double wer = 0.0;
  std::size_t rank = 1;  // smallest rank attaining the minimum
  std::size_t errors = 0;
  std::size_t ref_len = 0;
};

namespace detail {

inline TokenSeq checked_reference(const NBestEntry& e, const NormalizationPolicy& p) {
  TokenSeq ref = normalize(e.reference, p);
  if (ref.empty()) throw ValidationError("entry '" + e.id + "': oracle WER needs a non-empty reference");
  return ref;
}

inline double ratio(std::size_t num, std::size_t den) {
  return den ? static_cast<double>(num) / static_cast<double>(den) : 0.0;
}

}  // namespace detail

// Best single hypothesis: the ceiling for any re-ranking method.
inline NBestOracle oracle_nbest(const NBestEntry& e, const NormalizationPolicy& p = {}) {
  const TokenSeq ref = detail::checked_reference(e, p);
  NBestOracle o;
  o.ref_len = ref.size();
  o.errors = std::numeric_limits<std::size_t>::max();
  for (std::size_t k = 0; k < e.size(); ++k) {
    const std::size_t errs = edit_distance(ref, normalize(e.hypotheses[k], p));
    if (errs < o.errors) {
      o.errors = errs;
      o.rank = k + 1;
    }
  }
  o.wer = detail::ratio(o.errors, o.ref_len);
  return o;
}

// Reference positions whose token occurs in no hypothesis. Any transcription
// assembled from list tokens must get at least these wrong, and freely
// ordered list tokens get everything else right.
inline std::size_t vocabulary_missing(const TokenSeq& ref, const std::vector<TokenSeq>& hyps) {
  std::unordered_set<std::string> vocab;
  for (const auto& h : hyps) vocab.insert(h.begin(), h.end());
  return static_cast<std::size_t>(
      std::count_if(ref.begin(), ref.end(), [&](const std::string& t) { return !vocab.contains(t); }));
}

inline double oracle_vocabulary(const NBestEntry& e, const NormalizationPolicy& p = {}) {
  const TokenSeq ref = detail::checked_reference(e, p);
  std::vector<TokenSeq> hyps;
  for (const auto& h : e.hypotheses) hyps.push_back(normalize(h, p));
  return detail::ratio(vocabulary_missing(ref, hyps), ref.size());
}

// Minimum edit distance between `ref` and any path through the network
// (one arc per slot, epsilon arcs emit nothing).
//   cost[s][j]: best cost having consumed s slots and j reference tokens.
inline std::size_t lattice_min_errors(const ConfusionNetwork& cn, const TokenSeq& ref) {
  const std::size_t m = ref.size();
  std::vector<std::size_t> cur(m + 1), next(m + 1);
  for (std::size_t j = 0; j <= m; ++j) cur[j] = j;
  for (std::size_t s = 0; s < cn.size(); ++s) {
    const bool eps = cn.has_epsilon(s);
    // Taking a real token without matching anything costs one insertion;
    // skipping the slot via epsilon is free.
    const std::size_t skip = eps ? 0 : 1;
    next[0] = cur[0] + skip;
    for (std::size_t j = 1; j <= m; ++j) {
      // Every slot carries at least one real token, so a substitution is
      // always available.
      const std::size_t diag = cur[j - 1] + (cn.contains(s, ref[j - 1]) ? 0 : 1);
      next[j] = std::min({diag, cur[j] + skip, next[j - 1] + 1});
    }
    std::swap(cur, next);
  }
  return cur[m];
}

inline double oracle_lattice(const NBestEntry& e, const NormalizationPolicy& p = {}) {
  const TokenSeq ref = detail::checked_reference(e, p);
  return detail::ratio(lattice_min_errors(build_cn(e, p), ref), ref.size());
}

// ---------------------------------------------------------------------------
// Corpus report

enum class OracleVariant { vocab, lattice, both };

// One persisted per-entry row; corpus figures are ratios of sums.
struct OracleRow {
  std::string id;
  std::string test_set;
  std::size_t ref_len = 0;
  std::size_t nb_errors = 0;
  std::size_t nb_rank = 1;
  std::size_t rank1_errors = 0;
  std::size_t vocab_missing = 0;
  std::size_t lattice_errors = 0;

  Json to_json() const {
    Json j;
    j["id"] = id;
    j["test_set"] = test_set;
    j["ref_len"] = ref_len;
    j["nb_errors"] = nb_errors;
    j["nb_rank"] = nb_rank;
    j["rank1_errors"] = rank1_errors;
    j["vocab_missing"] = vocab_missing;
    j["lattice_errors"] = lattice_errors;
    return j;
  }

  static OracleRow from_json(const Json& j) {
    OracleRow r;
    r.id = j.at("id").get<std::string>();
    r.test_set = j.value("test_set", std::string{});
    r.ref_len = j.at("ref_len").get<std::size_t>();
    r.nb_errors = j.at("nb_errors").get<std::size_t>();
    r.nb_rank = j.at("nb_rank").get<std::size_t>();
    r.rank1_errors = j.at("rank1_errors").get<std::size_t>();
    r.vocab_missing = j.at("vocab_missing").get<std::size_t>();
    r.lattice_errors = j.at("lattice_errors").get<std::size_t>();
    return r;
  }

  friend bool operator==(const OracleRow&, const OracleRow&) = default;
};

struct OracleReport {
  std::vector<OracleRow> rows;
  std::size_t ref_len = 0;
  double baseline = 0.0;  // rank-1 WER
  double o_nb = 0.0;
  double o_cp_vocab = 0.0;
  double o_cp_lattice = 0.0;
};

inline OracleRow oracle_row(const NBestEntry& e, const NormalizationPolicy& p, OracleVariant v = OracleVariant::both) {
  const TokenSeq ref = detail::checked_reference(e, p);
  std::vector<TokenSeq> hyps;
  for (const auto& h : e.hypotheses) hyps.push_back(normalize(h, p));

  OracleRow r;
  r.id = e.id;
  r.ref_len = ref.size();
  r.nb_errors = std::numeric_limits<std::size_t>::max();
  for (std::size_t k = 0; k < hyps.size(); ++k) {
    const std::size_t errs = edit_distance(ref, hyps[k]);
    if (k == 0) r.rank1_errors = errs;
    if (errs < r.nb_errors) {
      r.nb_errors = errs;
      r.nb_rank = k + 1;
    }
  }
  if (v != OracleVariant::lattice) r.vocab_missing = vocabulary_missing(ref, hyps);
  if (v != OracleVariant::vocab) r.lattice_errors = lattice_min_errors(build_cn(hyps), ref);
  return r;
}

inline OracleReport summarize(std::vector<OracleRow> rows) {
  OracleReport rep;
  std::size_t nb = 0, r1 = 0, vocab = 0, lattice = 0;
  for (const auto& r : rows) {
    rep.ref_len += r.ref_len;
    nb += r.nb_errors;
    r1 += r.rank1_errors;
    vocab += r.vocab_missing;
    lattice += r.lattice_errors;
  }
  rep.baseline = detail::ratio(r1, rep.ref_len);
  rep.o_nb = detail::ratio(nb, rep.ref_len);
  rep.o_cp_vocab = detail::ratio(vocab, rep.ref_len);
  rep.o_cp_lattice = detail::ratio(lattice, rep.ref_len);
  rep.rows = std::move(rows);
  return rep;
}

inline OracleReport oracle_report(const Corpus& c, const NormalizationPolicy& p = {},
                                  OracleVariant v = OracleVariant::both, std::size_t workers = 1) {
  std::vector<OracleRow> rows(c.size());
  parallel_for(c.size(), workers, [&](std::size_t i) { rows[i] = oracle_row(c[i], p, v); });
  return summarize(std::move(rows));
}

}  // namespace nbestgec
