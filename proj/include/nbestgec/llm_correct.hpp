#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_map>
#include <vector>

#include <openssl/evp.h>

#include "httplib.h"
#include "nbestgec/corpus_io.hpp"
#include "nbestgec/correction.hpp"
#include "nbestgec/error.hpp"
#include "nbestgec/parallel.hpp"
#include "nbestgec/prompt.hpp"

namespace nbestgec {

// ---------------------------------------------------------------------------
// Response parsing

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = ascii_lower(c);
  return out;
}

inline std::vector<std::string_view> split_lines(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto nl = s.find('\n', start);
    if (nl == std::string_view::npos) {
      out.push_back(s.substr(start));
      break;
    }
    out.push_back(s.substr(start, nl - start));
    start = nl + 1;
  }
  return out;
}

// Longest labels first so "### response:" wins over "response:".
inline const std::vector<std::string_view>& answer_labels() {
  static const std::vector<std::string_view> labels{
      "i think the ground-truth of this speech should be:",
      "the ground-truth of this speech should be:",
      "the true transcription should be:",
      "the true transcription is:",
      "the corrected transcription is:",
      "corrected transcription:",
      "true transcription:",
      "### response:",
      "###response:",
      "transcription:",
      "response:",
      "answer:",
      "output:",
  };
  return labels;
}

inline const std::vector<std::string_view>& role_prefixes() {
  static const std::vector<std::string_view> prefixes{"assistant:", "chatgpt:", "gpt:", "system:", "a:", "r:"};
  return prefixes;
}

inline std::string_view strip_role(std::string_view line) {
  line = trim(line);
  const std::string l = lower(line);
  for (auto p : role_prefixes())
    if (l.starts_with(p)) return trim(line.substr(p.size()));
  return line;
}

inline std::string_view strip_quotes(std::string_view s) {
  static constexpr std::string_view pairs[][2] = {
      {"\"", "\""}, {"'", "'"}, {"`", "`"}, {"\xe2\x80\x9c", "\xe2\x80\x9d"}, {"\xe2\x80\x98", "\xe2\x80\x99"}};
  bool changed = true;
  while (changed) {
    changed = false;
    s = trim(s);
    for (const auto& q : pairs) {
      if (s.size() >= q[0].size() + q[1].size() && s.starts_with(q[0]) && s.ends_with(q[1])) {
        s = s.substr(q[0].size(), s.size() - q[0].size() - q[1].size());
        changed = true;
        break;
      }
    }
  }
  return s;
}

}  // namespace detail

// Pulls the transcription out of a chat reply. If some line carries an
// answer label ("Response:", "true transcription:", ...), the answer is the
// first non-empty text after the first such label; otherwise it is the
// first non-empty line. Role prefixes and wrapping quotes are removed.
// nullopt marks a parse failure.
inline std::optional<std::string> parse_response(std::string_view raw, PromptKind = PromptKind::instruction) {
  const auto lines = detail::split_lines(raw);
  std::vector<std::string_view> rest;
  bool labelled = false;
  for (std::size_t i = 0; i < lines.size() && !labelled; ++i) {
    const std::string l = detail::lower(lines[i]);
    for (auto label : detail::answer_labels()) {
      const auto pos = l.find(label);
      if (pos == std::string::npos) continue;
      rest.push_back(lines[i].substr(pos + label.size()));
      rest.insert(rest.end(), lines.begin() + static_cast<std::ptrdiff_t>(i) + 1, lines.end());
      labelled = true;
      break;
    }
  }
  if (!labelled) rest = lines;

  for (auto line : rest) {
    const std::string_view text = detail::strip_quotes(detail::strip_role(line));
    if (!text.empty()) return std::string(text);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Requests

struct EndpointConfig {
  std::string base_url = "https://api.openai.com/v1";
  std::string model = "gpt-3.5-turbo";
  double temperature = 0.0;
  int max_tokens = 256;
  std::string api_key;
  std::chrono::seconds timeout{60};
};

inline constexpr const char* api_key_env = "NBESTGEC_API_KEY";

// NBESTGEC_API_KEY, falling back to OPENAI_API_KEY.
inline std::string api_key_from_env() {
  for (const char* name : {api_key_env, "OPENAI_API_KEY"}) {
    if (const char* v = std::getenv(name); v && *v) return v;
  }
  return {};
}

inline Json chat_payload(const Conversation& conv, const EndpointConfig& cfg) {
  Json msgs = Json::array();
  for (const auto& m : conv) msgs.push_back({{"role", m.role}, {"content", m.content}});
  Json j;
  j["model"] = cfg.model;
  j["messages"] = std::move(msgs);
  j["temperature"] = cfg.temperature;
  j["max_tokens"] = cfg.max_tokens;
  return j;
}

inline std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error("SHA-256 digest failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

// Deterministic cache / idempotency key over the rendered prompt and model.
inline std::string idempotency_key(const Conversation& conv, std::string_view model) {
  Json j;
  j["model"] = model;
  Json msgs = Json::array();
  for (const auto& m : conv) msgs.push_back({{"role", m.role}, {"content", m.content}});
  j["messages"] = std::move(msgs);
  return sha256_hex(j.dump());
}

struct CorrectionRequest {
  std::string entry_id;
  Conversation prompt;
  EndpointConfig endpoint;
  std::string key;

  Json payload() const { return chat_payload(prompt, endpoint); }
};

inline CorrectionRequest make_request(const NBestEntry& e, Conversation prompt, const EndpointConfig& cfg) {
  CorrectionRequest r{e.id, std::move(prompt), cfg, {}};
  r.key = idempotency_key(r.prompt, cfg.model);
  return r;
}

// ---------------------------------------------------------------------------
// Transport

struct HttpResult {
  int status = 0;  // 0: no HTTP response (connection error, timeout)
  std::string body;
  std::string error;
};

inline bool retryable(const HttpResult& r) { return r.status == 0 || r.status == 429 || r.status >= 500; }

class ChatTransport {
 public:
  virtual ~ChatTransport() = default;
  virtual HttpResult send(const CorrectionRequest& req) = 0;
};

// OpenAI-style chat completions over HTTP(S):
//   POST {base_url}/chat/completions, bearer auth, JSON body.
class HttpTransport : public ChatTransport {
 public:
  explicit HttpTransport(const EndpointConfig& cfg) : cfg_(cfg) {
    const auto scheme_end = cfg.base_url.find("://");
    if (scheme_end == std::string::npos) throw ConfigError("endpoint URL needs a scheme: " + cfg.base_url);
    const auto path_start = cfg.base_url.find('/', scheme_end + 3);
    origin_ = cfg.base_url.substr(0, path_start);
    path_ = path_start == std::string::npos ? "" : cfg.base_url.substr(path_start);
    while (!path_.empty() && path_.back() == '/') path_.pop_back();
    path_ += "/chat/completions";
  }

  HttpResult send(const CorrectionRequest& req) override {
    httplib::Client cli(origin_);
    const auto secs = static_cast<time_t>(cfg_.timeout.count());
    cli.set_connection_timeout(secs, 0);
    cli.set_read_timeout(secs, 0);
    cli.set_write_timeout(secs, 0);
    httplib::Headers headers;
    if (!cfg_.api_key.empty()) headers.emplace("Authorization", "Bearer " + cfg_.api_key);
    auto res = cli.Post(path_, headers, req.payload().dump(), "application/json");
    if (!res) return {0, {}, httplib::to_string(res.error())};
    return {res->status, res->body, {}};
  }

 private:
  EndpointConfig cfg_;
  std::string origin_;
  std::string path_;
};

// Pulls choices[0].message.content out of a completion body.
inline std::optional<std::string> completion_content(const std::string& body) {
  try {
    const Json j = Json::parse(body);
    const Json& c = j.at("choices").at(0).at("message").at("content");
    if (c.is_string()) return c.get<std::string>();
  } catch (const Json::exception&) {
  }
  return std::nullopt;
}

inline std::string completion_body(std::string_view content) {
  Json j;
  j["choices"] = Json::array({{{"index", 0}, {"message", {{"role", "assistant"}, {"content", content}}}}});
  return j.dump();
}

// Offline transport replaying canned responses, looked up by entry id and
// then by request key. Counts calls and tracks concurrency for tests.
class MockTransport : public ChatTransport {
 public:
  MockTransport() = default;
  explicit MockTransport(std::unordered_map<std::string, std::string> canned) : canned_(std::move(canned)) {}

  // Fixture JSONL: {"id": ..., "response": ...} or {"key": ..., "response": ...}.
  static std::unordered_map<std::string, std::string> load_fixtures(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open mock fixtures " + path.string());
    std::unordered_map<std::string, std::string> canned;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (detail::trim(line).empty()) continue;
      try {
        const Json j = Json::parse(line);
        const std::string key = j.contains("id") ? j.at("id").get<std::string>() : j.at("key").get<std::string>();
        canned[key] = j.at("response").get<std::string>();
      } catch (const Json::exception& ex) {
        throw ParseError(lineno, ex.what());
      }
    }
    return canned;
  }

  // Statuses returned (in order) before canned responses are served; lets
  // tests exercise retry paths.
  void script_failures(std::vector<int> statuses) {
    std::lock_guard lock(mu_);
    failures_ = std::move(statuses);
  }

  void set_latency(std::chrono::milliseconds d) { latency_ = d; }

  HttpResult send(const CorrectionRequest& req) override {
    const int now = ++in_flight_;
    int prev = max_in_flight_.load();
    while (now > prev && !max_in_flight_.compare_exchange_weak(prev, now)) {
    }
    ++calls_;
    if (latency_.count() > 0) std::this_thread::sleep_for(latency_);

    HttpResult r;
    {
      std::lock_guard lock(mu_);
      if (next_failure_ < failures_.size()) {
        r.status = failures_[next_failure_++];
        r.error = "scripted failure";
      }
    }
    if (r.status == 0 && r.error.empty()) {
      auto it = canned_.find(req.entry_id);
      if (it == canned_.end()) it = canned_.find(req.key);
      if (it == canned_.end()) {
        r = {404, R"({"error":"no canned response"})", "no canned response for '" + req.entry_id + "'"};
      } else {
        r = {200, completion_body(it->second), {}};
      }
    }
    --in_flight_;
    return r;
  }

  int calls() const noexcept { return calls_.load(); }
  int max_in_flight() const noexcept { return max_in_flight_.load(); }

 private:
  std::unordered_map<std::string, std::string> canned_;
  std::atomic<int> in_flight_{0};
  std::atomic<int> max_in_flight_{0};
  std::atomic<int> calls_{0};
  std::chrono::milliseconds latency_{0};
  std::mutex mu_;
  std::vector<int> failures_;
  std::size_t next_failure_ = 0;
};

// ---------------------------------------------------------------------------
// Retry

struct RetryPolicy {
  int max_attempts = 4;
  std::chrono::milliseconds base_delay{500};
  std::chrono::milliseconds max_delay{8000};
  std::function<void(std::chrono::milliseconds)> sleep = [](std::chrono::milliseconds d) {
    std::this_thread::sleep_for(d);
  };

  // base * 2^(attempt-1), capped.
  std::chrono::milliseconds delay(int attempt) const {
    auto d = base_delay;
    for (int i = 1; i < attempt && d < max_delay; ++i) d *= 2;
    return std::min(d, max_delay);
  }
};

inline HttpResult send_with_retry(ChatTransport& transport, const CorrectionRequest& req, const RetryPolicy& policy) {
  HttpResult r;
  for (int attempt = 1; attempt <= std::max(1, policy.max_attempts); ++attempt) {
    try {
      r = transport.send(req);
    } catch (const std::exception& ex) {
      r = {0, {}, ex.what()};
    }
    if (!retryable(r) || attempt == policy.max_attempts) break;
    policy.sleep(policy.delay(attempt));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Cache

// Append-only JSONL of completed responses keyed by request key. Writes go
// through one mutex, so a cache can be shared by all batch workers.
class ResponseCache {
 public:
  ResponseCache() = default;  // in-memory only

  explicit ResponseCache(const std::filesystem::path& dir) : path_(dir / "responses.jsonl") {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create cache directory " + dir.string() + ": " + ec.message());
    std::ifstream in(*path_);
    std::string line;
    std::size_t lineno = 0;
    while (in && std::getline(in, line)) {
      ++lineno;
      if (detail::trim(line).empty()) continue;
      try {
        const Json j = Json::parse(line);
        entries_[j.at("key").get<std::string>()] = j.at("response").get<std::string>();
      } catch (const Json::exception& ex) {
        throw ParseError(lineno, std::string("corrupt cache file: ") + ex.what());
      }
    }
  }

  std::optional<std::string> lookup(const std::string& key) const {
    std::lock_guard lock(mu_);
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  void store(const CorrectionRequest& req, const std::string& response) {
    std::lock_guard lock(mu_);
    if (!entries_.emplace(req.key, response).second) return;
    if (!path_) return;
    std::ofstream out(*path_, std::ios::app);
    if (!out) throw IoError("cannot append to cache " + path_->string());
    Json j;
    j["key"] = req.key;
    j["model"] = req.endpoint.model;
    j["id"] = req.entry_id;
    j["response"] = response;
    out << j.dump() << '\n';
  }

  std::size_t size() const {
    std::lock_guard lock(mu_);
    return entries_.size();
  }

 private:
  std::optional<std::filesystem::path> path_;
  mutable std::mutex mu_;
  std::unordered_map<std::string, std::string> entries_;
};

// ---------------------------------------------------------------------------
// Batch driver

enum class TransportMode { live, mock, cache_only };

struct BatchOptions {
  PromptTemplate prompt = PromptTemplate::builtin(PromptKind::instruction);
  std::vector<NBestEntry> demos;
  EndpointConfig endpoint;
  TransportMode mode = TransportMode::mock;
  std::size_t concurrency = 4;
  RetryPolicy retry;
};

// One result per entry, in corpus order. Cache hits skip the transport;
// request and parse failures become markers and never stop the batch.
// Configuration problems (e.g. no credential in live mode) throw before any
// request is sent.
inline std::vector<CorrectionResult> correct_batch(const Corpus& c, const BatchOptions& opt, ChatTransport* transport,
                                                   ResponseCache* cache) {
  opt.prompt.validate();
  if (opt.concurrency == 0) throw ConfigError("concurrency limit must be positive");
  if (opt.mode == TransportMode::live && opt.endpoint.api_key.empty())
    throw ConfigError(std::string("live mode needs an API key in $") + api_key_env);
  if (opt.mode != TransportMode::cache_only && !transport) throw ConfigError("no transport configured");

  // Render everything first so template errors surface before any traffic.
  std::vector<CorrectionRequest> requests;
  requests.reserve(c.size());
  for (const auto& e : c) requests.push_back(make_request(e, render_prompt(opt.prompt, e, opt.demos, opt.demos.size()), opt.endpoint));

  const std::string tag = "llm:" + opt.endpoint.model;
  std::vector<CorrectionResult> results(c.size());
  parallel_for(c.size(), opt.concurrency, [&](std::size_t i) {
    const CorrectionRequest& req = requests[i];
    CorrectionResult& out = results[i];
    out.id = req.entry_id;
    out.corrector = tag;

    std::optional<std::string> content;
    if (cache) {
      content = cache->lookup(req.key);
      out.cached = content.has_value();
    }
    if (!content) {
      if (opt.mode == TransportMode::cache_only) {
        out.status = CorrectionStatus::request_failure;
        out.raw_response = "cache miss";
        return;
      }
      const HttpResult r = send_with_retry(*transport, req, opt.retry);
      if (r.status != 200) {
        out.status = CorrectionStatus::request_failure;
        out.raw_response = "HTTP " + std::to_string(r.status) + (r.error.empty() ? "" : ": " + r.error);
        return;
      }
      content = completion_content(r.body);
      if (!content) {
        out.status = CorrectionStatus::parse_failure;
        out.raw_response = r.body;
        return;
      }
      if (cache) cache->store(req, *content);
    }
    out.raw_response = *content;
    if (auto text = parse_response(*content, opt.prompt.kind)) {
      out.corrected = std::move(*text);
    } else {
      out.status = CorrectionStatus::parse_failure;
    }
  });
  return results;
}

}  // namespace nbestgec
