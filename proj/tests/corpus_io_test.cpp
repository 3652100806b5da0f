#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "nbestgec/alignment.hpp"
#include "nbestgec/corpus_io.hpp"
#include "test_oracles.hpp"

namespace nbestgec {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("nbestgec-test-" + std::to_string(::getpid()) + "-" +
                                                 std::to_string(counter_++))) {
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

Corpus parse(const std::string& text, std::size_t max_n = 5) {
  std::istringstream in(text);
  return parse_corpus(in, max_n);
}

TEST(LoadCorpus, DeduplicatesPreservingRank) {
  const Corpus c = parse(R"({"id":"u1","hypotheses":["a b","a b","a c"],"reference":"a b"})");
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].hypotheses, (std::vector<std::string>{"a b", "a c"}));
  EXPECT_EQ(c[0].domain, default_domain);
}

TEST(LoadCorpus, TruncatesToTopN) {
  const Corpus c = parse(R"({"id":"u1","hypotheses":["1","2","3","4","5","6","7"],"reference":"x"})");
  EXPECT_EQ(c[0].hypotheses, (std::vector<std::string>{"1", "2", "3", "4", "5"}));
  const Corpus c20 = parse(R"({"id":"u1","hypotheses":["1","2","3","4","5","6","7"],"reference":"x"})", 20);
  EXPECT_EQ(c20[0].size(), 7u);
}

TEST(LoadCorpus, DedupIsOnRawStrings) {
  const Corpus c = parse(R"({"id":"u1","hypotheses":["A b","a b","a b."],"reference":"a b"})");
  EXPECT_EQ(c[0].size(), 3u);
}

TEST(LoadCorpus, AcceptsLegacyFieldNames) {
  const Corpus c = parse(R"({"id":"u1","nbest":["x"],"ground_truth":"y","domain":"atis"})");
  EXPECT_EQ(c[0].hypotheses, std::vector<std::string>{"x"});
  EXPECT_EQ(c[0].reference, "y");
  EXPECT_EQ(c.manifest().at("atis"), 1u);
}

TEST(LoadCorpus, DuplicateIdIsAnErrorWithLineNumber) {
  try {
    parse("{\"id\":\"u1\",\"hypotheses\":[\"a\"],\"reference\":\"a\"}\n"
          "{\"id\":\"u1\",\"hypotheses\":[\"b\"],\"reference\":\"b\"}\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(LoadCorpus, MalformedLineNamesLine) {
  try {
    parse("{\"id\":\"u1\",\"hypotheses\":[\"a\"],\"reference\":\"a\"}\n\n{not json\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(LoadCorpus, EmptyHypothesisListIsAnError) {
  EXPECT_THROW(parse(R"({"id":"u1","hypotheses":[],"reference":"a"})"), ParseError);
  EXPECT_THROW(parse(R"({"id":"u1","reference":"a"})"), ParseError);
}

TEST(LoadCorpus, ScoresFollowDedupAndMustBeNonIncreasing) {
  const Corpus c = parse(R"({"id":"u","hypotheses":["a","a","b"],"reference":"a","scores":[-1,-2,-3]})");
  EXPECT_EQ(*c[0].scores, (std::vector<double>{-1, -3}));
  EXPECT_THROW(parse(R"({"id":"u","hypotheses":["a","b"],"reference":"a","scores":[-2,-1]})"), ParseError);
  EXPECT_THROW(parse(R"({"id":"u","hypotheses":["a","b"],"reference":"a","scores":[-2]})"), ParseError);
}

TEST(LoadCorpus, MissingFileIsIoError) { EXPECT_THROW(load_corpus("/nonexistent/x.jsonl"), IoError); }

TEST(Corpus, ManifestMatchesCounts) {
  const Corpus c = parse("{\"id\":\"1\",\"domain\":\"a\",\"hypotheses\":[\"x\"],\"reference\":\"x\"}\n"
                         "{\"id\":\"2\",\"domain\":\"b\",\"hypotheses\":[\"x\"],\"reference\":\"x\"}\n"
                         "{\"id\":\"3\",\"domain\":\"a\",\"hypotheses\":[\"x\"],\"reference\":\"x\"}\n");
  EXPECT_EQ(c.manifest().at("a"), 2u);
  EXPECT_EQ(c.manifest().at("b"), 1u);
}

TEST(CorpusStats, CountsAndAverageLength) {
  const Corpus c = parse("{\"id\":\"1\",\"hypotheses\":[\"x\"],\"reference\":\"a b c\"}\n"
                         "{\"id\":\"2\",\"hypotheses\":[\"x\"],\"reference\":\"a\"}\n");
  const CorpusStats s = corpus_stats(c);
  EXPECT_EQ(s.pair_count, 2u);
  EXPECT_DOUBLE_EQ(s.avg_ref_length, 2.0);
  EXPECT_FALSE(s.empty_corpus);
  std::size_t sum = 0;
  for (const auto& [d, ds] : s.per_domain) sum += ds.pair_count;
  EXPECT_EQ(sum, s.pair_count);
}

TEST(CorpusStats, EmptyCorpusIsFlagged) {
  const CorpusStats s = corpus_stats(Corpus{});
  EXPECT_EQ(s.pair_count, 0u);
  EXPECT_EQ(s.avg_ref_length, 0.0);
  EXPECT_TRUE(s.empty_corpus);
}

TEST(RoundTrip, RandomCorporaSurviveWriteThenLoad) {
  TempDir dir;
  for (unsigned seed = 0; seed < 20; ++seed) {
    testing::Generator g(seed);
    std::vector<NBestEntry> entries;
    for (int i = 0; i < 30; ++i) {
      auto e = g.entry("id" + std::to_string(i), 7, 10);
      e.domain = i % 3 ? "wsj" : "atis";
      if (i % 2) {
        std::vector<double> s;
        for (std::size_t k = 0; k < e.size(); ++k) s.push_back(-0.5 * static_cast<double>(k) - 0.125);
        e.scores = s;
      }
      validate_entry(e);
      entries.push_back(std::move(e));
    }
    const Corpus c(std::move(entries));
    const auto path = dir.path() / "c.jsonl";
    write_corpus(path, c);
    const Corpus back = load_corpus(path);
    ASSERT_EQ(back, c);
    // Loading is idempotent: dedup+truncate applied twice changes nothing.
    write_corpus(path, back);
    ASSERT_EQ(load_corpus(path), back);
    ASSERT_EQ(back.manifest(), c.manifest());
  }
}

TEST(WriteResults, RoundTripsRows) {
  TempDir dir;
  const std::vector<ScoreRow> rows{{"a", "wsj", "m", 1, 0, 2, 10}, {"b", "wsj", "m", 0, 0, 0, 3}, {"c", "", "", 5, 5, 5, 15}};
  const auto path = dir.path() / "rows.jsonl";
  write_results(path, rows);
  EXPECT_EQ(read_results<ScoreRow>(path), rows);
  std::ifstream in(path);
  std::string first;
  std::getline(in, first);
  EXPECT_EQ(first, R"({"id":"a","test_set":"wsj","method":"m","substitutions":1,"deletions":0,"insertions":2,"ref_len":10})");
}

TEST(WriteResults, EmptyListGivesEmptyFile) {
  TempDir dir;
  const auto path = dir.path() / "empty.jsonl";
  write_results(path, std::vector<ScoreRow>{});
  EXPECT_EQ(fs::file_size(path), 0u);
}

TEST(WriteResults, MissingDirectoryIsAnError) {
  EXPECT_THROW(write_results(fs::path("/nonexistent-dir/rows.jsonl"), std::vector<ScoreRow>{}), IoError);
}

}  // namespace
}  // namespace nbestgec
