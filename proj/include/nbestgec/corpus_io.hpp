#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "json.hpp"
#include "nbestgec/error.hpp"
#include "nbestgec/normalize.hpp"

namespace nbestgec {

using Json = nlohmann::ordered_json;

inline constexpr std::size_t default_max_n = 5;
inline constexpr const char* default_domain = "unspecified";

// One utterance: ranked hypotheses (rank = position + 1) and its reference.
struct NBestEntry {
  std::string id;
  std::string domain = default_domain;
  std::vector<std::string> hypotheses;
  std::string reference;
  std::optional<std::vector<double>> scores;

  std::size_t size() const noexcept { return hypotheses.size(); }
  const std::string& best() const { return hypotheses.front(); }

  friend bool operator==(const NBestEntry&, const NBestEntry&) = default;
};

// Drops exact (raw string) duplicates keeping the first occurrence, then
// keeps the top max_n. Scores follow their hypotheses. Throws
// ValidationError on an empty list or malformed scores.
inline void validate_entry(NBestEntry& e, std::size_t max_n = default_max_n) {
  if (e.id.empty()) throw ValidationError("entry has an empty id");
  if (e.hypotheses.empty()) throw ValidationError("entry '" + e.id + "' has no hypotheses");
  if (max_n == 0) throw ValidationError("max_n must be positive");
  if (e.scores) {
    const auto& s = *e.scores;
    if (s.size() != e.hypotheses.size())
      throw ValidationError("entry '" + e.id + "': scores and hypotheses differ in length");
    for (std::size_t i = 1; i < s.size(); ++i)
      if (s[i] > s[i - 1]) throw ValidationError("entry '" + e.id + "': scores must be non-increasing by rank");
  }

  std::unordered_set<std::string> seen;
  std::vector<std::string> hyps;
  std::vector<double> scores;
  for (std::size_t i = 0; i < e.hypotheses.size() && hyps.size() < max_n; ++i) {
    if (!seen.insert(e.hypotheses[i]).second) continue;
    hyps.push_back(std::move(e.hypotheses[i]));
    if (e.scores) scores.push_back((*e.scores)[i]);
  }
  e.hypotheses = std::move(hyps);
  if (e.scores) e.scores = std::move(scores);
}

// Immutable after construction; safe to share across reader threads.
class Corpus {
 public:
  Corpus() = default;

  explicit Corpus(std::vector<NBestEntry> entries) : entries_(std::move(entries)) {
    std::unordered_set<std::string> ids;
    for (const auto& e : entries_) {
      if (!ids.insert(e.id).second) throw ValidationError("duplicate entry id '" + e.id + "'");
      ++manifest_[e.domain];
    }
  }

  const std::vector<NBestEntry>& entries() const noexcept { return entries_; }
  const std::map<std::string, std::size_t>& manifest() const noexcept { return manifest_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const NBestEntry& operator[](std::size_t i) const { return entries_[i]; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  friend bool operator==(const Corpus& a, const Corpus& b) { return a.entries_ == b.entries_; }

 private:
  std::vector<NBestEntry> entries_;
  std::map<std::string, std::size_t> manifest_;
};

// ---------------------------------------------------------------------------
// JSONL schema

namespace detail {

inline const Json* find_any(const Json& obj, std::initializer_list<const char*> keys) {
  for (const char* k : keys) {
    auto it = obj.find(k);
    if (it != obj.end()) return &*it;
  }
  return nullptr;
}

}  // namespace detail

inline Json entry_to_json(const NBestEntry& e) {
  Json j;
  j["id"] = e.id;
  j["domain"] = e.domain;
  j["hypotheses"] = e.hypotheses;
  j["reference"] = e.reference;
  if (e.scores) j["scores"] = *e.scores;
  return j;
}

// Accepts "hypotheses" or the legacy "nbest", "reference" or "ground_truth".
inline NBestEntry entry_from_json(const Json& j) {
  if (!j.is_object()) throw ValidationError("expected a JSON object");
  NBestEntry e;
  const Json* id = detail::find_any(j, {"id"});
  if (!id || !id->is_string()) throw ValidationError("missing string field 'id'");
  e.id = id->get<std::string>();

  if (const Json* d = detail::find_any(j, {"domain"}); d && !d->is_null()) {
    if (!d->is_string()) throw ValidationError("field 'domain' must be a string");
    e.domain = d->get<std::string>();
  }

  const Json* hyps = detail::find_any(j, {"hypotheses", "nbest"});
  if (!hyps || !hyps->is_array()) throw ValidationError("missing array field 'hypotheses'");
  for (const auto& h : *hyps) {
    if (!h.is_string()) throw ValidationError("hypotheses must be strings");
    e.hypotheses.push_back(h.get<std::string>());
  }

  const Json* ref = detail::find_any(j, {"reference", "ground_truth"});
  if (!ref || !ref->is_string()) throw ValidationError("missing string field 'reference'");
  e.reference = ref->get<std::string>();

  if (const Json* s = detail::find_any(j, {"scores"}); s && !s->is_null()) {
    if (!s->is_array()) throw ValidationError("field 'scores' must be an array");
    std::vector<double> scores;
    for (const auto& v : *s) {
      if (!v.is_number()) throw ValidationError("scores must be numbers");
      scores.push_back(v.get<double>());
    }
    e.scores = std::move(scores);
  }
  return e;
}

inline Corpus parse_corpus(std::istream& in, std::size_t max_n = default_max_n) {
  std::vector<NBestEntry> entries;
  std::unordered_set<std::string> ids;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    NBestEntry e;
    try {
      e = entry_from_json(Json::parse(line));
      validate_entry(e, max_n);
    } catch (const Json::exception& ex) {
      throw ParseError(lineno, std::string("malformed JSON: ") + ex.what());
    } catch (const ValidationError& ex) {
      throw ParseError(lineno, ex.what());
    }
    if (!ids.insert(e.id).second) throw ParseError(lineno, "duplicate entry id '" + e.id + "'");
    entries.push_back(std::move(e));
  }
  return Corpus(std::move(entries));
}

inline Corpus load_corpus(const std::filesystem::path& path, std::size_t max_n = default_max_n) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open corpus file " + path.string());
  return parse_corpus(in, max_n);
}

inline void write_corpus(std::ostream& out, const Corpus& c) {
  for (const auto& e : c) out << entry_to_json(e).dump() << '\n';
}

inline void write_corpus(const std::filesystem::path& path, const Corpus& c) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  write_corpus(out, c);
  if (!out) throw IoError("write failed for " + path.string());
}

// ---------------------------------------------------------------------------
// Result rows. Any type with `Json to_json() const` and
// `static T from_json(const Json&)` can be persisted as JSONL.

template <typename T>
concept JsonRow = requires(const T& row, const Json& j) {
  { row.to_json() } -> std::convertible_to<Json>;
  { T::from_json(j) } -> std::convertible_to<T>;
};

template <JsonRow T>
void write_results(std::ostream& out, std::span<const T> rows) {
  for (const auto& r : rows) out << r.to_json().dump() << '\n';
}

template <JsonRow T>
void write_results(const std::filesystem::path& path, std::span<const T> rows) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  write_results(out, rows);
  if (!out) throw IoError("write failed for " + path.string());
}

template <JsonRow T>
void write_results(const std::filesystem::path& path, const std::vector<T>& rows) {
  write_results(path, std::span<const T>(rows));
}

template <JsonRow T>
std::vector<T> read_results(std::istream& in) {
  std::vector<T> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      rows.push_back(T::from_json(Json::parse(line)));
    } catch (const Json::exception& ex) {
      throw ParseError(lineno, ex.what());
    } catch (const ValidationError& ex) {
      throw ParseError(lineno, ex.what());
    }
  }
  return rows;
}

template <JsonRow T>
std::vector<T> read_results(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_results<T>(in);
}

// ---------------------------------------------------------------------------
// Summary statistics

struct DomainStats {
  std::size_t pair_count = 0;
  double avg_ref_length = 0.0;
};

struct CorpusStats {
  std::size_t pair_count = 0;
  double avg_ref_length = 0.0;
  double avg_list_size = 0.0;
  bool empty_corpus = false;  // averages are placeholder zeros
  std::map<std::string, DomainStats> per_domain;
};

inline CorpusStats corpus_stats(const Corpus& c, const NormalizationPolicy& p = {}) {
  CorpusStats s;
  s.pair_count = c.size();
  s.empty_corpus = c.empty();
  std::map<std::string, std::size_t> tokens_by_domain;
  std::size_t total_tokens = 0, total_hyps = 0;
  for (const auto& e : c) {
    const std::size_t n = normalize(e.reference, p).size();
    total_tokens += n;
    total_hyps += e.size();
    tokens_by_domain[e.domain] += n;
    ++s.per_domain[e.domain].pair_count;
  }
  if (!c.empty()) {
    s.avg_ref_length = static_cast<double>(total_tokens) / static_cast<double>(c.size());
    s.avg_list_size = static_cast<double>(total_hyps) / static_cast<double>(c.size());
  }
  for (auto& [domain, ds] : s.per_domain)
    ds.avg_ref_length = static_cast<double>(tokens_by_domain[domain]) / static_cast<double>(ds.pair_count);
  return s;
}

}  // namespace nbestgec
