// nbestgec: scoring, oracle, statistics, correction and reporting for N-best
// hypothesis corpora in JSONL form.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nbestgec/nbestgec.hpp"

namespace fs = std::filesystem;
using namespace nbestgec;

namespace {

struct PolicyFlags {
  bool keep_case = false;
  bool keep_punct = false;
  bool apostrophe_split = false;
  bool char_level = false;

  void attach(CLI::App* app) {
    app->add_flag("--keep-case", keep_case, "Do not lowercase");
    app->add_flag("--keep-punct", keep_punct, "Do not strip punctuation");
    app->add_flag("--apostrophe-split", apostrophe_split, "Split clitics: china's -> china 's");
    app->add_flag("--char-level", char_level, "Score characters instead of words (CER)");
  }

  NormalizationPolicy policy() const {
    NormalizationPolicy p;
    p.lowercase = !keep_case;
    p.strip_punctuation = !keep_punct;
    p.apostrophe_split = apostrophe_split;
    p.char_level = char_level;
    return p;
  }
};

std::string pct(double fraction, int decimals = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, 100.0 * fraction);
  return buf;
}

std::string fmt(double x, int decimals = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
  return buf;
}

// Writes to `path`, or stdout when empty.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw IoError("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

std::pair<std::size_t, std::size_t> parse_ranks(const std::string& spec) {
  const auto dots = spec.find("..");
  try {
    if (dots == std::string::npos) {
      const auto k = std::stoul(spec);
      return {k, k};
    }
    return {std::stoul(spec.substr(0, dots)), std::stoul(spec.substr(dots + 2))};
  } catch (const std::exception&) {
    throw ConfigError("bad rank range '" + spec + "' (expected K or A..B)");
  }
}

std::vector<double> parse_weights(const std::string& spec) {
  std::vector<double> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError("bad weight '" + item + "'");
    }
  }
  return out;
}

std::vector<TokenSeq> read_training_text(const std::string& refs_path, const std::string& corpus_path,
                                         const NormalizationPolicy& p) {
  std::vector<TokenSeq> sentences;
  if (!refs_path.empty()) {
    std::ifstream in(refs_path);
    if (!in) throw IoError("cannot open " + refs_path);
    std::string line;
    while (std::getline(in, line)) {
      auto toks = normalize(line, p);
      if (!toks.empty()) sentences.push_back(std::move(toks));
    }
  }
  if (!corpus_path.empty()) {
    for (const auto& e : load_corpus(corpus_path, 1)) sentences.push_back(normalize(e.reference, p));
  }
  return sentences;
}

// ---------------------------------------------------------------------------

int run_stats(const std::string& input, std::size_t nbest, const std::string& ranks, const std::string& emit,
              std::size_t word_freq, bool div, const std::string& protocol, const NormalizationPolicy& p) {
  const Corpus c = load_corpus(input, nbest);
  const CorpusStats s = corpus_stats(c, p);
  const bool json = emit == "json";
  if (emit != "tsv" && !json) throw ConfigError("--emit must be tsv or json");

  const BetterCandidateRule r1 = protocol == "loose" ? BetterCandidateRule::non_strict : BetterCandidateRule::strict;
  const RecoveryRule r2 = protocol == "loose" ? RecoveryRule::bag : RecoveryRule::positional;
  if (protocol != "strict" && protocol != "loose") throw ConfigError("--protocol must be strict or loose");

  Json out;
  out["pair_count"] = s.pair_count;
  out["avg_ref_length"] = s.avg_ref_length;
  out["avg_list_size"] = s.avg_list_size;
  if (s.empty_corpus) out["warning"] = "empty corpus";
  for (const auto& [domain, ds] : s.per_domain)
    out["domains"][domain] = {{"pair_count", ds.pair_count}, {"avg_ref_length", ds.avg_ref_length}};

  if (!json) {
    if (s.empty_corpus) std::cerr << "warning: empty corpus\n";
    std::cout << "domain\tpairs\tavg_ref_len\n";
    for (const auto& [domain, ds] : s.per_domain)
      std::cout << domain << '\t' << ds.pair_count << '\t' << fmt(ds.avg_ref_length, 1) << '\n';
    std::cout << "ALL\t" << s.pair_count << '\t' << fmt(s.avg_ref_length, 1) << '\n';
  }

  if (!ranks.empty()) {
    const auto [first, last] = parse_ranks(ranks);
    const auto rows = rank_stats(c, first, last, p, r1, r2);
    if (json) {
      for (const auto& r : rows)
        out["ranks"].push_back({{"rank", r.rank},
                                {"p_case_i", r.case_i.value()},
                                {"case_i_support", r.case_i.support},
                                {"p_case_ii", r.case_ii.value()},
                                {"case_ii_support", r.case_ii.support},
                                {"skipped", r.skipped}});
    } else {
      std::cout << "\nrank\tp_case_i\tcase_i_support\tp_case_ii\tcase_ii_support\tskipped\n";
      for (const auto& r : rows)
        std::cout << r.rank << '\t' << fmt(r.case_i.value()) << '\t' << r.case_i.support << '\t'
                  << fmt(r.case_ii.value()) << '\t' << r.case_ii.support << '\t' << r.skipped << '\n';
    }
  }

  if (word_freq > 0) {
    const auto refs = word_frequency(c, Side::references, word_freq, p);
    const auto hyps = word_frequency(c, Side::hypotheses, word_freq, p);
    if (json) {
      for (const auto& [w, n] : refs) out["word_frequency"]["references"].push_back({w, n});
      for (const auto& [w, n] : hyps) out["word_frequency"]["hypotheses"].push_back({w, n});
    } else {
      std::cout << "\nside\ttoken\tcount\n";
      for (const auto& [w, n] : refs) std::cout << "references\t" << w << '\t' << n << '\n';
      for (const auto& [w, n] : hyps) std::cout << "hypotheses\t" << w << '\t' << n << '\n';
    }
  }

  if (div) {
    if (!json) std::cout << "\nid\tdistinct\tmean_pairwise_distance\n";
    for (const auto& e : c) {
      const Diversity d = diversity(e, p);
      if (json) {
        out["diversity"].push_back({{"id", e.id}, {"distinct", d.distinct}, {"mean_pairwise_distance", d.mean_pairwise_distance}});
      } else {
        std::cout << e.id << '\t' << d.distinct << '\t' << fmt(d.mean_pairwise_distance) << '\n';
      }
    }
  }

  if (json) std::cout << out.dump(2) << '\n';
  return 0;
}

int run_score(const std::string& input, std::size_t nbest, std::size_t rank, const std::string& corrections,
              const std::string& test_set, const std::string& method, const std::string& out_path, std::size_t threads,
              const NormalizationPolicy& p) {
  const Corpus c = load_corpus(input, nbest);
  CorpusWer w;
  std::string method_tag = method;
  if (!corrections.empty()) {
    const auto results = read_results<CorrectionResult>(fs::path(corrections));
    const CorrectionScore cs = score_corrections(c, results, p, threads);
    if (cs.failures || cs.missing)
      std::cerr << "note: " << cs.failures << " failed and " << cs.missing
                << " missing corrections scored with the rank-1 hypothesis\n";
    w = cs.wer;
    if (method_tag.empty() && !results.empty()) method_tag = results.front().corrector;
  } else {
    w = batch_wer(c, p, rank, threads);
    if (method_tag.empty()) method_tag = rank == 1 ? "baseline" : "rank" + std::to_string(rank);
  }
  if (w.skipped) std::cerr << "note: " << w.skipped << " entries have fewer than " << rank << " hypotheses; skipped\n";

  std::cout << "id\twer\tS\tD\tI\tref_len\n";
  for (auto& row : w.rows) {
    row.test_set = test_set;
    row.method = method_tag;
    const WerBreakdown b = row.as_breakdown();
    std::cout << row.id << '\t' << pct(b.wer) << '\t' << row.substitutions << '\t' << row.deletions << '\t'
              << row.insertions << '\t' << row.ref_len << '\n';
  }
  const WerBreakdown& a = w.aggregate;
  std::cout << "ALL\t" << pct(a.wer) << '\t' << a.substitutions << '\t' << a.deletions << '\t' << a.insertions << '\t'
            << a.ref_len << '\n';
  if (!out_path.empty()) write_results(fs::path(out_path), w.rows);
  return 0;
}

int run_oracle(const std::string& input, std::size_t nbest, const std::string& variant, const std::string& test_set,
               const std::string& out_path, std::size_t threads, const NormalizationPolicy& p) {
  OracleVariant v;
  if (variant == "vocab") v = OracleVariant::vocab;
  else if (variant == "lattice") v = OracleVariant::lattice;
  else if (variant == "both") v = OracleVariant::both;
  else throw ConfigError("--variant must be vocab, lattice or both");

  const Corpus c = load_corpus(input, nbest);
  OracleReport rep = oracle_report(c, p, v, threads);
  for (auto& r : rep.rows) r.test_set = test_set;

  const bool show_vocab = v != OracleVariant::lattice;
  const bool show_lattice = v != OracleVariant::vocab;
  std::cout << "id\tref_len\tbaseline\to_nb\tnb_rank";
  if (show_vocab) std::cout << "\to_cp_vocab";
  if (show_lattice) std::cout << "\to_cp_lattice";
  std::cout << '\n';
  auto ratio = [](std::size_t a, std::size_t b) { return b ? static_cast<double>(a) / static_cast<double>(b) : 0.0; };
  for (const auto& r : rep.rows) {
    std::cout << r.id << '\t' << r.ref_len << '\t' << pct(ratio(r.rank1_errors, r.ref_len)) << '\t'
              << pct(ratio(r.nb_errors, r.ref_len)) << '\t' << r.nb_rank;
    if (show_vocab) std::cout << '\t' << pct(ratio(r.vocab_missing, r.ref_len));
    if (show_lattice) std::cout << '\t' << pct(ratio(r.lattice_errors, r.ref_len));
    std::cout << '\n';
  }
  std::cout << "ALL\t" << rep.ref_len << '\t' << pct(rep.baseline, 1) << '\t' << pct(rep.o_nb, 1) << "\t-";
  if (show_vocab) std::cout << '\t' << pct(rep.o_cp_vocab, 1);
  if (show_lattice) std::cout << '\t' << pct(rep.o_cp_lattice, 1);
  std::cout << '\n';
  if (!out_path.empty()) write_results(fs::path(out_path), rep.rows);
  return 0;
}

struct CorrectArgs {
  std::string method = "rover";
  std::string input;
  std::size_t nbest = default_max_n;
  std::string output;
  std::size_t threads = 1;
  // rover
  std::string weights;
  double eps_penalty = 1.0;
  // llm
  std::string templ = "instruction";
  std::string endpoint = "https://api.openai.com/v1";
  std::string model = "gpt-3.5-turbo";
  std::size_t shots = 0;
  std::string demo_pool;
  std::string cache_dir;
  std::string mock;
  bool cache_only = false;
  std::size_t concurrency = 4;
  double temperature = 0.0;
  int max_tokens = 256;
  int max_attempts = 4;
};

int run_correct(const CorrectArgs& a, const NormalizationPolicy& p) {
  const Corpus c = load_corpus(a.input, a.nbest);
  std::vector<CorrectionResult> results;

  if (a.method == "rover") {
    VoteConfig cfg;
    if (!a.weights.empty()) cfg.weights = parse_weights(a.weights);
    cfg.epsilon_penalty = a.eps_penalty;
    cfg.validate();
    results.resize(c.size());
    parallel_for(c.size(), a.threads, [&](std::size_t i) {
      const TokenSeq voted = rover_vote(build_cn(c[i], p), cfg);
      CorrectionResult& r = results[i];
      r.id = c[i].id;
      r.corrector = "rover";
      r.corrected = join(voted);
      if (voted.empty()) {
        r.status = CorrectionStatus::parse_failure;
        r.raw_response = "vote produced an empty transcription";
      }
    });
  } else if (a.method == "llm") {
    BatchOptions opt;
    const PromptKind kind = prompt_kind_from_string(a.templ);
    opt.prompt = PromptTemplate::builtin(kind);
    if (kind == PromptKind::few_shot_tap) {
      if (a.demo_pool.empty()) throw ConfigError("tapN needs --demo-pool");
      if (a.shots == 0) throw ConfigError("tapN needs --shots >= 1");
      const Corpus pool = load_corpus(a.demo_pool, a.nbest);
      opt.demos = select_demonstrations(pool.entries(), a.shots, p);
    } else if (a.shots != 0) {
      throw ConfigError("--shots only applies to the tapN template");
    }
    opt.endpoint.base_url = a.endpoint;
    opt.endpoint.model = a.model;
    opt.endpoint.temperature = a.temperature;
    opt.endpoint.max_tokens = a.max_tokens;
    opt.concurrency = a.concurrency;
    opt.retry.max_attempts = a.max_attempts;

    std::unique_ptr<ChatTransport> transport;
    if (a.cache_only) {
      opt.mode = TransportMode::cache_only;
    } else if (!a.mock.empty()) {
      opt.mode = TransportMode::mock;
      transport = std::make_unique<MockTransport>(MockTransport::load_fixtures(a.mock));
    } else {
      opt.mode = TransportMode::live;
      opt.endpoint.api_key = api_key_from_env();
      if (opt.endpoint.api_key.empty())
        throw ConfigError(std::string("live mode needs an API key in $") + api_key_env + " or $OPENAI_API_KEY");
      transport = std::make_unique<HttpTransport>(opt.endpoint);
    }
    std::optional<ResponseCache> cache;
    if (!a.cache_dir.empty()) cache.emplace(fs::path(a.cache_dir));
    else if (a.cache_only) throw ConfigError("--cache-only needs --cache");
    results = correct_batch(c, opt, transport.get(), cache ? &*cache : nullptr);
  } else {
    throw ConfigError("--method must be rover or llm (use the rescore command for LM re-ranking)");
  }

  Output out(a.output);
  write_results(out.stream(), std::span<const CorrectionResult>(results));
  std::size_t failed = 0;
  for (const auto& r : results) failed += r.failed() ? 1 : 0;
  if (failed) std::cerr << "note: " << failed << " of " << results.size() << " corrections failed\n";
  return 0;
}

struct RescoreArgs {
  std::string train_refs;
  std::string train_corpus;
  std::string load_model;
  std::string save_model;
  std::string input;
  std::size_t nbest = default_max_n;
  std::size_t order = 3;
  double addk = 0.1;
  double acoustic_weight = 0.0;
  std::string output;
};

int run_rescore(const RescoreArgs& a, const NormalizationPolicy& p) {
  std::optional<NGramModel> model;
  if (!a.load_model.empty()) {
    model = NGramModel::load(a.load_model);
  } else {
    const auto sentences = read_training_text(a.train_refs, a.train_corpus, p);
    model = NGramModel::train(sentences, {a.order, a.addk});
  }
  if (!a.save_model.empty()) model->save(a.save_model);
  if (a.input.empty()) return 0;

  const Corpus c = load_corpus(a.input, a.nbest);
  std::vector<CorrectionResult> results;
  for (const auto& e : c) {
    const auto ranked = rescore(e, *model, p, a.acoustic_weight);
    CorrectionResult r;
    r.id = e.id;
    r.corrector = "rescore";
    r.corrected = ranked.front().text;
    r.raw_response = "rank " + std::to_string(ranked.front().original_rank) + ", perplexity " +
                     fmt(ranked.front().perplexity, 3);
    results.push_back(std::move(r));
  }
  Output out(a.output);
  write_results(out.stream(), std::span<const CorrectionResult>(results));
  return 0;
}

int run_report(const std::vector<std::string>& score_files, const std::string& oracle_file, const std::string& format,
               const std::string& ocp) {
  std::vector<ScoreRow> rows;
  for (const auto& f : score_files) {
    auto r = read_results<ScoreRow>(fs::path(f));
    rows.insert(rows.end(), r.begin(), r.end());
  }
  const auto oracle = read_results<OracleRow>(fs::path(oracle_file));
  CompositionalOracle v;
  if (ocp == "vocab") v = CompositionalOracle::vocab;
  else if (ocp == "lattice") v = CompositionalOracle::lattice;
  else throw ConfigError("--ocp must be vocab or lattice");
  const RunReport rep = build_report(rows, oracle, v);
  if (format == "tsv") std::cout << render_tsv(rep);
  else if (format == "md") std::cout << render_markdown(rep);
  else throw ConfigError("--format must be tsv or md");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"N-best hypothesis scoring, oracles, statistics and error correction"};
  app.require_subcommand(1);

  // stats
  auto* stats = app.add_subcommand("stats", "Corpus statistics and rank-wise N-best information table");
  std::string stats_input, ranks, emit = "tsv", protocol = "strict";
  std::size_t stats_nbest = default_max_n, word_freq = 0;
  bool div = false;
  PolicyFlags stats_policy;
  stats->add_option("--input", stats_input, "Corpus JSONL")->required();
  stats->add_option("--nbest", stats_nbest, "Keep the top N distinct hypotheses")->capture_default_str();
  stats->add_option("--ranks", ranks, "Rank range for case (i)/(ii) probabilities, e.g. 2..20");
  stats->add_option("--emit", emit, "tsv or json")->capture_default_str();
  stats->add_option("--protocol", protocol, "strict (WER <, aligned position) or loose (WER <=, bag of words)")
      ->capture_default_str();
  stats->add_option("--word-freq", word_freq, "Print the top-K word frequencies per side");
  stats->add_flag("--diversity", div, "Per-entry hypothesis diversity");
  stats_policy.attach(stats);

  // score
  auto* score = app.add_subcommand("score", "Per-entry and corpus WER");
  std::string score_input, corrections, test_set, method, score_out;
  std::size_t score_nbest = default_max_n, hyp_rank = 1, score_threads = 1;
  PolicyFlags score_policy;
  score->add_option("--input", score_input, "Corpus JSONL")->required();
  score->add_option("--nbest", score_nbest, "Keep the top N distinct hypotheses")->capture_default_str();
  score->add_option("--hyp-rank", hyp_rank, "Score the rank-K hypothesis")->capture_default_str();
  score->add_option("--corrections", corrections, "Score CorrectionResult JSONL instead of a hypothesis rank");
  score->add_option("--test-set", test_set, "Test set tag stored in --out rows");
  score->add_option("--method", method, "Method tag stored in --out rows");
  score->add_option("--out", score_out, "Write per-entry score rows (JSONL) for the report command");
  score->add_option("--threads", score_threads, "Worker threads")->capture_default_str();
  score_policy.attach(score);

  // oracle
  auto* oracle = app.add_subcommand("oracle", "N-best and compositional oracle WER");
  std::string oracle_input, variant = "both", oracle_set, oracle_out;
  std::size_t oracle_nbest = default_max_n, oracle_threads = 1;
  PolicyFlags oracle_policy;
  oracle->add_option("--input", oracle_input, "Corpus JSONL")->required();
  oracle->add_option("--nbest", oracle_nbest, "Keep the top N distinct hypotheses")->capture_default_str();
  oracle->add_option("--variant", variant, "vocab, lattice or both")->capture_default_str();
  oracle->add_option("--test-set", oracle_set, "Test set tag stored in --out rows");
  oracle->add_option("--out", oracle_out, "Write per-entry oracle rows (JSONL)");
  oracle->add_option("--threads", oracle_threads, "Worker threads")->capture_default_str();
  oracle_policy.attach(oracle);

  // correct
  auto* correct = app.add_subcommand("correct", "Correct each entry with ROVER voting or an LLM");
  CorrectArgs ca;
  PolicyFlags correct_policy;
  correct->add_option("--method", ca.method, "rover or llm")->capture_default_str();
  correct->add_option("--input", ca.input, "Corpus JSONL")->required();
  correct->add_option("--nbest", ca.nbest, "Keep the top N distinct hypotheses")->capture_default_str();
  correct->add_option("--output", ca.output, "CorrectionResult JSONL (default stdout)");
  correct->add_option("--threads", ca.threads, "Worker threads for rover")->capture_default_str();
  correct->add_option("--weights", ca.weights, "Rover rank weights, comma separated (default 1,.5,.5,.5,.5)");
  correct->add_option("--eps-penalty", ca.eps_penalty, "Rover epsilon vote multiplier in [0,1]")->capture_default_str();
  correct->add_option("--template", ca.templ, "instruction, tap0 or tapN")->capture_default_str();
  correct->add_option("--endpoint", ca.endpoint, "Chat completions base URL")->capture_default_str();
  correct->add_option("--model", ca.model, "Model name")->capture_default_str();
  correct->add_option("--shots", ca.shots, "Number of demonstrations for tapN")->capture_default_str();
  correct->add_option("--demo-pool", ca.demo_pool, "Corpus JSONL to draw demonstrations from");
  correct->add_option("--cache", ca.cache_dir, "Response cache directory");
  correct->add_flag("--cache-only", ca.cache_only, "Never contact the endpoint; misses become failures");
  correct->add_option("--mock", ca.mock, "Canned responses JSONL; no network access");
  correct->add_option("--concurrency", ca.concurrency, "Maximum requests in flight")->capture_default_str();
  correct->add_option("--temperature", ca.temperature, "Sampling temperature")->capture_default_str();
  correct->add_option("--max-tokens", ca.max_tokens, "Completion token limit")->capture_default_str();
  correct->add_option("--max-attempts", ca.max_attempts, "Attempts per request on 429/5xx")->capture_default_str();
  correct_policy.attach(correct);

  // rescore
  auto* resc = app.add_subcommand("rescore", "Re-rank hypotheses by n-gram perplexity");
  RescoreArgs ra;
  PolicyFlags rescore_policy;
  resc->add_option("--train-refs", ra.train_refs, "Plain-text training transcriptions, one per line");
  resc->add_option("--train-corpus", ra.train_corpus, "Corpus JSONL whose references are training text");
  resc->add_option("--load-model", ra.load_model, "Load a saved model instead of training");
  resc->add_option("--save-model", ra.save_model, "Save the trained model (JSON)");
  resc->add_option("--input", ra.input, "Corpus JSONL to re-rank");
  resc->add_option("--nbest", ra.nbest, "Keep the top N distinct hypotheses")->capture_default_str();
  resc->add_option("--order", ra.order, "n-gram order")->capture_default_str();
  resc->add_option("--addk", ra.addk, "Add-k smoothing constant")->capture_default_str();
  resc->add_option("--acoustic-weight", ra.acoustic_weight, "Weight of entry scores in the ranking key")
      ->capture_default_str();
  resc->add_option("--output", ra.output, "CorrectionResult JSONL (default stdout)");
  rescore_policy.attach(resc);

  // report
  auto* report = app.add_subcommand("report", "WER table from persisted score and oracle rows");
  std::vector<std::string> score_files;
  std::string oracle_file, format = "tsv", ocp = "vocab";
  report->add_option("--scores", score_files, "Score row JSONL files")->required();
  report->add_option("--oracle", oracle_file, "Oracle row JSONL")->required();
  report->add_option("--format", format, "tsv or md")->capture_default_str();
  report->add_option("--ocp", ocp, "Compositional oracle column: vocab or lattice")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (stats->parsed())
      return run_stats(stats_input, stats_nbest, ranks, emit, word_freq, div, protocol, stats_policy.policy());
    if (score->parsed())
      return run_score(score_input, score_nbest, hyp_rank, corrections, test_set, method, score_out, score_threads,
                       score_policy.policy());
    if (oracle->parsed())
      return run_oracle(oracle_input, oracle_nbest, variant, oracle_set, oracle_out, oracle_threads,
                        oracle_policy.policy());
    if (correct->parsed()) return run_correct(ca, correct_policy.policy());
    if (resc->parsed()) {
      if (ra.load_model.empty() && ra.train_refs.empty() && ra.train_corpus.empty())
        throw ConfigError("rescore needs --train-refs, --train-corpus or --load-model");
      return run_rescore(ra, rescore_policy.policy());
    }
    if (report->parsed()) return run_report(score_files, oracle_file, format, ocp);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
