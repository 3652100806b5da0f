#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

#include "nbestgec/alignment.hpp"
#include "nbestgec/corpus_io.hpp"
#include "nbestgec/error.hpp"

namespace nbestgec {

enum class CorrectionStatus { ok, parse_failure, request_failure };

inline const char* to_string(CorrectionStatus s) {
  switch (s) {
    case CorrectionStatus::ok: return "ok";
    case CorrectionStatus::parse_failure: return "parse_failure";
    case CorrectionStatus::request_failure: return "request_failure";
  }
  return "ok";
}

inline CorrectionStatus status_from_string(const std::string& s) {
  if (s == "ok") return CorrectionStatus::ok;
  if (s == "parse_failure") return CorrectionStatus::parse_failure;
  if (s == "request_failure") return CorrectionStatus::request_failure;
  throw ValidationError("unknown correction status '" + s + "'");
}

// Output of any corrector. `corrected` is empty exactly when status != ok.
struct CorrectionResult {
  std::string id;
  std::string corrected;
  std::string corrector;  // "rover", "rescore", "llm:<model>"
  bool cached = false;
  CorrectionStatus status = CorrectionStatus::ok;
  std::string raw_response;  // verbatim model output, or the failure reason

  bool failed() const noexcept { return status != CorrectionStatus::ok; }

  Json to_json() const {
    Json j;
    j["id"] = id;
    j["corrected"] = corrected;
    j["corrector"] = corrector;
    j["cached"] = cached;
    j["status"] = to_string(status);
    j["raw_response"] = raw_response;
    return j;
  }

  static CorrectionResult from_json(const Json& j) {
    CorrectionResult r;
    r.id = j.at("id").get<std::string>();
    r.corrected = j.at("corrected").get<std::string>();
    r.corrector = j.at("corrector").get<std::string>();
    r.cached = j.value("cached", false);
    r.status = status_from_string(j.value("status", std::string("ok")));
    r.raw_response = j.value("raw_response", std::string{});
    return r;
  }

  friend bool operator==(const CorrectionResult&, const CorrectionResult&) = default;
};

struct CorrectionScore {
  CorpusWer wer;
  std::size_t failures = 0;  // scored with the rank-1 hypothesis instead
  std::size_t missing = 0;   // corpus entries without a result, also rank-1
};

// Scores corrected texts against the corpus references. Failed or missing
// corrections fall back to the rank-1 hypothesis, which is what a pipeline
// would emit without the corrector.
inline CorrectionScore score_corrections(const Corpus& c, const std::vector<CorrectionResult>& results,
                                         const NormalizationPolicy& p = {}, std::size_t workers = 1) {
  std::unordered_map<std::string, const CorrectionResult*> by_id;
  for (const auto& r : results) {
    if (!by_id.emplace(r.id, &r).second) throw ValidationError("duplicate correction for entry '" + r.id + "'");
  }
  CorrectionScore out;
  for (const auto& e : c) {
    auto it = by_id.find(e.id);
    if (it == by_id.end()) ++out.missing;
    else if (it->second->failed()) ++out.failures;
  }
  out.wer = score_corpus(
      c, p,
      [&](const NBestEntry& e) -> const std::string* {
        auto it = by_id.find(e.id);
        if (it == by_id.end() || it->second->failed()) return &e.hypotheses.front();
        return &it->second->corrected;
      },
      workers);
  return out;
}

}  // namespace nbestgec
