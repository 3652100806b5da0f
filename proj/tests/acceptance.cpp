// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "nbestgec/nbestgec.hpp"
#include "test_oracles.hpp"

using namespace nbestgec;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

class Check {
 public:
  void expect(bool cond, const std::string& what) {
    if (!cond && failures_++ < 5) std::printf("    violation: %s\n", what.c_str());
  }
  int failures() const { return failures_; }

 private:
  int failures_ = 0;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome exhaustive_alignment() {
  const auto seqs = testing::all_sequences({"a", "b", "c"}, 6);
  std::size_t pairs = 0;
  Check check;
  for (const auto& r : seqs) {
    for (const auto& h : seqs) {
      const auto a = align(r, h);
      const int want = testing::recursive_edit_distance(r, h);
      if (static_cast<int>(a.counts.errors()) != want) check.expect(false, join(r) + " | " + join(h));
      ++pairs;
    }
  }
  return {check.failures() == 0, std::to_string(pairs) + " pairs, " + std::to_string(check.failures()) + " mismatches"};
}

Outcome invariant_fuzz() {
  testing::Generator g(2024);
  Check check;
  for (int i = 0; i < 10000; ++i) {
    const auto e = g.entry("f" + std::to_string(i), 5, 12);
    const auto ref = normalize(e.reference);
    const auto row = oracle_row(e, {});
    const std::string id = e.id;
    check.expect(row.vocab_missing <= row.nb_errors, id + ": o_cp_vocab > o_nb");
    check.expect(row.nb_errors <= row.rank1_errors, id + ": o_nb > WER(hyp1)");
    check.expect(row.lattice_errors <= row.rank1_errors, id + ": o_cp_lattice > WER(hyp1)");
    for (const auto& h : e.hypotheses) {
      const auto hyp = normalize(h);
      const auto c = align(ref, hyp).counts;
      check.expect(c.correct + c.substitutions + c.deletions == ref.size(), id + ": C+S+D != |ref|");
      check.expect(c.correct + c.substitutions + c.insertions == hyp.size(), id + ": C+S+I != |hyp|");
    }
    auto more = e;
    more.hypotheses.push_back(join(g.tokens(0, 12)));
    const auto row2 = oracle_row(more, {});
    check.expect(row2.nb_errors <= row.nb_errors, id + ": o_nb grew after adding a hypothesis");
    check.expect(row2.vocab_missing <= row.vocab_missing, id + ": o_cp_vocab grew after adding a hypothesis");
    check.expect(row2.lattice_errors <= row.lattice_errors, id + ": o_cp_lattice grew after adding a hypothesis");
  }
  return {check.failures() == 0, "10000 entries, " + std::to_string(check.failures()) + " violations"};
}

Outcome lattice_brute_force() {
  testing::Generator g(77, 4);
  Check check;
  for (int i = 0; i < 1000; ++i) {
    const auto e = g.entry("l" + std::to_string(i), 3, 5);
    const auto ref = normalize(e.reference);
    const auto cn = build_cn(e);
    const double got = oracle_lattice(e);
    const int want = testing::brute_force_lattice_errors(cn, ref);
    check.expect(got == static_cast<double>(want) / static_cast<double>(ref.size()), e.id + ": lattice oracle differs");
  }
  return {check.failures() == 0, "1000 entries, " + std::to_string(check.failures()) + " mismatches"};
}

Outcome lm_normalization() {
  Check check;
  double worst = 0.0;
  for (unsigned seed = 0; seed < 50; ++seed) {
    testing::Generator g(seed, 2 + seed % 19);
    const std::size_t order = 1 + seed % 3;
    const double k = 0.01 + 0.05 * (seed % 7);
    std::vector<TokenSeq> sentences;
    for (int i = 0; i < 40; ++i) sentences.push_back(g.tokens(1, 10));
    const auto m = NGramModel::train(sentences, {order, k});
    auto contexts = m.stored_contexts();
    const auto ids = static_cast<NGramModel::Id>(m.id_to_token().size());
    for (int i = 0; i < 20; ++i) {
      std::vector<NGramModel::Id> ctx(order - 1);
      for (auto& c : ctx) c = static_cast<NGramModel::Id>(g.uniform(0, ids - 1));
      contexts.push_back(ctx);
    }
    for (const auto& ctx : contexts) {
      double sum = 0.0;
      for (auto w : m.predictable_ids()) sum += m.prob(ctx, w);
      worst = std::max(worst, std::abs(sum - 1.0));
      check.expect(std::abs(sum - 1.0) <= 1e-9, "model " + std::to_string(seed) + ": mass " + std::to_string(sum));
    }
    for (int i = 0; i < 20; ++i) {
      auto e = g.entry("r", 5, 10);
      if (i % 4 == 0) e.hypotheses.push_back(e.hypotheses.front() + " ");  // ties
      const auto a = rescore(e, m), b = rescore(e, m);
      std::vector<bool> seen(e.size(), false);
      for (std::size_t j = 0; j < a.size(); ++j) {
        check.expect(a[j].original_rank == b[j].original_rank, "rescore is not deterministic");
        check.expect(!seen[a[j].original_rank - 1], "rescore repeated a hypothesis");
        seen[a[j].original_rank - 1] = true;
        if (j > 0 && a[j].key == a[j - 1].key)
          check.expect(a[j - 1].original_rank < a[j].original_rank, "tie not broken by original rank");
      }
      check.expect(a.size() == e.size(), "rescore changed the list size");
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2e", worst);
  return {check.failures() == 0, "50 models, max |sum-1| = " + std::string(buf)};
}

Outcome objective() {
  const double a = weighted_nbest_objective({-2, -9, -9, -9}, {{1, 0, 0, 0}});
  const double b = weighted_nbest_objective({-1, -2, -3, -4}, {{0.1, 0.05, 0.05, 0.05}});
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.17g and %.17g", a, b);
  return {a == -2.0 && b == -0.55, buf};
}

Outcome rover_efficacy() {
  constexpr int seeds = 20;
  int improved = 0, worse = 0;
  std::string detail;
  for (int seed = 0; seed < seeds; ++seed) {
    std::mt19937 rng(1000 + static_cast<unsigned>(seed));
    std::uniform_int_distribution<int> word(0, 999);
    std::bernoulli_distribution sub(0.2);
    std::vector<NBestEntry> es;
    for (int i = 0; i < 500; ++i) {
      NBestEntry e;
      e.id = "s" + std::to_string(i);
      TokenSeq ref(10);
      for (auto& t : ref) t = "w" + std::to_string(word(rng));
      e.reference = join(ref);
      for (int k = 0; k < 5; ++k) {
        TokenSeq h = ref;
        for (auto& t : h)
          if (sub(rng)) t = "x" + std::to_string(word(rng));
        e.hypotheses.push_back(join(h));
      }
      es.push_back(std::move(e));
    }
    const Corpus c(std::move(es));
    std::vector<CorrectionResult> voted;
    for (const auto& e : c) voted.push_back({e.id, join(rover_vote(build_cn(e))), "rover", false, CorrectionStatus::ok, {}});
    const double base = batch_wer(c).aggregate.wer;
    const double rover = score_corrections(c, voted).wer.aggregate.wer;
    if (rover < base) ++improved;
    if (rover > base) ++worse;
    if (seed == 0) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "seed 0: rank-1 %.4f -> rover %.4f; ", base, rover);
      detail = buf;
    }
  }
  detail += std::to_string(improved) + "/" + std::to_string(seeds) + " seeds strictly improved";
  return {worse == 0 && improved * 10 >= seeds * 9, detail};
}

Outcome case_study() {
  const Corpus c = load_corpus(NBESTGEC_FIXTURES "/case_study.jsonl");
  const auto& e = c[0];
  const std::string corrected = MockTransport::load_fixtures(NBESTGEC_FIXTURES "/case_study_correction.jsonl").at(e.id);
  bool ok = true;
  std::string detail;
  NormalizationPolicy split;
  split.apostrophe_split = true;
  const std::pair<const char*, NormalizationPolicy> policies[] = {
      {"default", NormalizationPolicy{}}, {"apostrophe_split", split}, {"raw", NormalizationPolicy::raw()}};
  for (const auto& [name, p] : policies) {
    const auto w1 = wer(e.reference, e.hypotheses[0], p);
    const auto w2 = wer(e.reference, e.hypotheses[1], p);
    const auto wc = wer(e.reference, corrected, p);
    std::printf("    %-16s ref_len=%zu  hyp1 %zu/%zu=%.1f%%  hyp2 %zu/%zu=%.1f%%  corrected %.1f%%\n", name, w1.ref_len,
                w1.errors(), w1.ref_len, 100 * w1.wer, w2.errors(), w2.ref_len, 100 * w2.wer, 100 * wc.wer);
    if (std::string(name) == "default") ok = ok && w1.wer > w2.wer && w2.wer > 0.0 && wc.wer == 0.0;
    if (std::string(name) == "apostrophe_split") {
      ok = ok && w1.ref_len == 18 && w1.errors() == 3 && round1(100 * w1.wer) == 16.7;
      detail = "apostrophe_split: " + std::to_string(w1.errors()) + "/" + std::to_string(w1.ref_len);
    }
  }
  return {ok, detail};
}

Outcome prompts_and_mock() {
  const Corpus c = load_corpus(NBESTGEC_FIXTURES "/case_study.jsonl");
  const Corpus pool = load_corpus(NBESTGEC_FIXTURES "/demo_pool.jsonl");
  const auto demos = select_demonstrations(pool.entries(), 1);
  bool ok = true;
  std::string detail;
  const std::tuple<PromptKind, std::vector<NBestEntry>, const char*> cases[] = {
      {PromptKind::instruction, {}, "instruction.txt"},
      {PromptKind::zero_shot_tap, {}, "tap0.txt"},
      {PromptKind::few_shot_tap, demos, "tap1.txt"}};
  for (const auto& [kind, d, file] : cases) {
    const std::string got = transcript(render_prompt(PromptTemplate::builtin(kind), c[0], d, d.size()));
    const bool match = got == slurp(std::string(NBESTGEC_FIXTURES "/prompts/") + file);
    ok = ok && match;
    detail += std::string(file) + (match ? " ok; " : " MISMATCH; ");
  }

  MockTransport mock(MockTransport::load_fixtures(NBESTGEC_FIXTURES "/case_study_correction.jsonl"));
  ResponseCache cache;
  BatchOptions opt;
  opt.mode = TransportMode::mock;
  const auto results = correct_batch(c, opt, &mock, &cache);
  const auto score = score_corrections(c, results);
  const auto again = correct_batch(c, opt, &mock, &cache);
  ok = ok && results.size() == 1 && results[0].status == CorrectionStatus::ok && score.failures == 0 &&
       score.wer.aggregate.wer == 0.0 && mock.calls() == 1 && again[0].cached;
  char buf[96];
  std::snprintf(buf, sizeof buf, "mock run WER %.1f%%, %d transport call(s)", 100 * score.wer.aggregate.wer, mock.calls());
  return {ok, detail + buf};
}

Outcome report_arithmetic() {
  const double a = relative_reduction(4.5, 2.7), b = relative_reduction(8.3, 1.7);
  RunReport rep;
  rep.rows.push_back({"wsj", "m", 4.5, 2.7, a, 4.1, 1.2});
  const std::string md = render_markdown(rep);
  const bool ok = a == 40.0 && b == 79.5 && md.find("2.7 (-40.0%)") != std::string::npos;
  char buf[96];
  std::snprintf(buf, sizeof buf, "4.5->2.7: -%.1f%%, 8.3->1.7: -%.1f%%", a, b);
  return {ok, buf};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "alignment matches recursive oracle (exhaustive, len<=6, |A|=3)", 30, exhaustive_alignment},
      {2, "oracle and alignment invariant fuzz", 60, invariant_fuzz},
      {3, "lattice oracle matches CN path enumeration", 30, lattice_brute_force},
      {4, "LM normalization and rescore permutation", 0, lm_normalization},
      {5, "weighted N-best objective examples", 0, objective},
      {6, "ROVER does not lose to rank-1", 60, rover_efficacy},
      {7, "case-study fixture WER ordering", 0, case_study},
      {8, "prompt golden files and offline mock run", 0, prompts_and_mock},
      {9, "report relative reduction arithmetic", 0, report_arithmetic},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& ex) {
      o = {false, std::string("exception: ") + ex.what()};
    }
    const double secs = seconds_since(t0);
    if (c.budget_s > 0 && secs > c.budget_s) {
      o.ok = false;
      o.detail += " (over time budget)";
    }
    std::printf("%s criterion %d: %s [%s] (%.2f s)\n", o.ok ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += o.ok ? 0 : 1;
  }
  std::printf("SKIP criterion 10: public-corpus reproduction needs downloaded data (not run offline)\n");
  return failed == 0 ? 0 : 1;
}
