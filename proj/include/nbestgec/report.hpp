#pragma once

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "nbestgec/alignment.hpp"
#include "nbestgec/error.hpp"
#include "nbestgec/oracle.hpp"

namespace nbestgec {

// Round half away from zero to one decimal.
inline double round1(double x) { return std::round(x * 10.0) / 10.0; }

// Percent WER reduction, positive = improvement, one decimal.
inline double relative_reduction(double baseline, double method) {
  if (!(baseline > 0.0)) throw ValidationError("relative reduction needs a positive baseline WER");
  if (method < 0.0) throw ValidationError("WER cannot be negative");
  const double r = round1((baseline - method) / baseline * 100.0);
  return r == 0.0 ? 0.0 : r;  // no "-0.0"
}

enum class CompositionalOracle { vocab, lattice };

struct ReportRow {
  std::string test_set;
  std::string method;
  double baseline_wer = 0.0;  // percent
  double method_wer = 0.0;    // percent
  std::optional<double> relative_reduction;
  double o_nb = 0.0;
  double o_cp = 0.0;
};

struct RunReport {
  std::vector<ReportRow> rows;
  CompositionalOracle o_cp_variant = CompositionalOracle::vocab;
};

namespace detail {

inline double percent(std::size_t errors, std::size_t ref_len) {
  return ref_len ? 100.0 * static_cast<double>(errors) / static_cast<double>(ref_len) : 0.0;
}

inline std::string fixed1(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f", round1(x) == 0.0 ? 0.0 : round1(x));
  return buf;
}

}  // namespace detail

// Groups persisted score rows by (test set, method) and pairs them with the
// oracle rows of the same test set. The baseline column is the rank-1 WER
// carried by the oracle rows. Every run must cover exactly the oracle's
// entries with the same reference lengths.
inline RunReport build_report(const std::vector<ScoreRow>& scores, const std::vector<OracleRow>& oracle,
                              CompositionalOracle variant = CompositionalOracle::vocab) {
  std::map<std::string, std::map<std::string, std::size_t>> oracle_refs;  // set -> id -> ref_len
  std::map<std::string, std::vector<const OracleRow*>> oracle_by_set;
  for (const auto& r : oracle) {
    if (!oracle_refs[r.test_set].emplace(r.id, r.ref_len).second)
      throw ValidationError("oracle rows repeat id '" + r.id + "' in test set '" + r.test_set + "'");
    oracle_by_set[r.test_set].push_back(&r);
  }

  std::map<std::pair<std::string, std::string>, std::vector<const ScoreRow*>> runs;
  for (const auto& s : scores) runs[{s.test_set, s.method}].push_back(&s);

  RunReport rep;
  rep.o_cp_variant = variant;
  for (const auto& [key, rows] : runs) {
    const auto& [set, method] = key;
    auto refs = oracle_refs.find(set);
    if (refs == oracle_refs.end()) throw ValidationError("no oracle rows for test set '" + set + "'");
    if (rows.size() != refs->second.size())
      throw ValidationError("run '" + method + "' on '" + set + "' scores " + std::to_string(rows.size()) +
                            " entries but the oracle covers " + std::to_string(refs->second.size()));
    std::set<std::string> seen;
    std::size_t errors = 0, ref_len = 0;
    for (const ScoreRow* s : rows) {
      auto it = refs->second.find(s->id);
      if (it == refs->second.end() || it->second != s->ref_len || !seen.insert(s->id).second)
        throw ValidationError("run '" + method + "' on '" + set + "' does not match the oracle corpus at entry '" +
                              s->id + "'");
      errors += s->errors();
      ref_len += s->ref_len;
    }

    const OracleReport o = summarize([&] {
      std::vector<OracleRow> v;
      for (const OracleRow* r : oracle_by_set[set]) v.push_back(*r);
      return v;
    }());

    ReportRow row;
    row.test_set = set;
    row.method = method;
    row.baseline_wer = 100.0 * o.baseline;
    row.method_wer = detail::percent(errors, ref_len);
    if (row.baseline_wer > 0.0)
      row.relative_reduction = relative_reduction(round1(row.baseline_wer), round1(row.method_wer));
    row.o_nb = 100.0 * o.o_nb;
    row.o_cp = 100.0 * (variant == CompositionalOracle::vocab ? o.o_cp_vocab : o.o_cp_lattice);
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

inline std::string render_tsv(const RunReport& rep) {
  std::string out = "test_set\tmethod\tbaseline\twer\trel_reduction\to_nb\to_cp\n";
  for (const auto& r : rep.rows) {
    out += r.test_set + '\t' + r.method + '\t' + detail::fixed1(r.baseline_wer) + '\t' + detail::fixed1(r.method_wer) +
           '\t' + (r.relative_reduction ? detail::fixed1(*r.relative_reduction) : "NA") + '\t' +
           detail::fixed1(r.o_nb) + '\t' + detail::fixed1(r.o_cp) + '\n';
  }
  return out;
}

// Table style: the WER cell carries the signed relative change, e.g.
// "2.7 (-40.0%)" for a 40% reduction.
inline std::string render_markdown(const RunReport& rep) {
  const char* ocp = rep.o_cp_variant == CompositionalOracle::vocab ? "o_cp" : "o_cp (lattice)";
  std::string out = std::string("| Test Set | Method | Baseline | WER | o_nb | ") + ocp + " |\n";
  out += "|---|---|---:|---:|---:|---:|\n";
  for (const auto& r : rep.rows) {
    std::string cell = detail::fixed1(r.method_wer);
    if (r.relative_reduction) {
      const double change = -*r.relative_reduction;
      cell += " (" + std::string(change > 0.0 ? "+" : "") + detail::fixed1(change) + "%)";
    }
    out += "| " + r.test_set + " | " + r.method + " | " + detail::fixed1(r.baseline_wer) + " | " + cell + " | " +
           detail::fixed1(r.o_nb) + " | " + detail::fixed1(r.o_cp) + " |\n";
  }
  return out;
}

}  // namespace nbestgec
