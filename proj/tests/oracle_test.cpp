#include <gtest/gtest.h>

#include "nbestgec/oracle.hpp"
#include "test_oracles.hpp"

namespace nbestgec {
namespace {

NBestEntry entry(std::vector<std::string> hyps, std::string ref) {
  return NBestEntry{"e", "d", std::move(hyps), std::move(ref), std::nullopt};
}

TEST(OracleNBest, ReferenceAtRankThree) {
  const auto o = oracle_nbest(entry({"x y", "a x", "a b", "a b z"}, "a b"));
  EXPECT_EQ(o.wer, 0.0);
  EXPECT_EQ(o.rank, 3u);
}

TEST(OracleNBest, PicksMinimumWer) {
  // WERs 0.5, 0.25, 0.75 against a 4-token reference.
  const auto o = oracle_nbest(entry({"a b x y", "a b c x", "a x y z"}, "a b c d"));
  EXPECT_DOUBLE_EQ(o.wer, 0.25);
  EXPECT_EQ(o.rank, 2u);
}

TEST(OracleNBest, EarliestRankWinsTies) {
  EXPECT_EQ(oracle_nbest(entry({"a x", "a y"}, "a b")).rank, 1u);
}

TEST(OracleNBest, EmptyReferenceIsAnError) {
  EXPECT_THROW(oracle_nbest(entry({"a"}, " ")), ValidationError);
  EXPECT_THROW(oracle_vocabulary(entry({"a"}, "")), ValidationError);
  EXPECT_THROW(oracle_lattice(entry({"a"}, "...")), ValidationError);
}

TEST(OracleVocabulary, CountsMissingTokens) {
  EXPECT_DOUBLE_EQ(oracle_vocabulary(entry({"a c", "c"}, "a b")), 0.5);
  EXPECT_DOUBLE_EQ(oracle_vocabulary(entry({"b x", "y a"}, "a b")), 0.0);
}

TEST(OracleLattice, Examples) {
  EXPECT_DOUBLE_EQ(oracle_lattice(entry({"a b c", "a b c"}, "a b c")), 0.0);
  EXPECT_DOUBLE_EQ(oracle_lattice(entry({"a x c", "a b y"}, "a b c")), 0.0);
  // "b" never appears, and the CN has three real slots.
  EXPECT_DOUBLE_EQ(oracle_lattice(entry({"a x c"}, "a b c")), 1.0 / 3.0);
}

TEST(OracleLattice, MatchesBruteForce) {
  testing::Generator g(21, 4);
  for (int trial = 0; trial < 500; ++trial) {
    const auto e = g.entry("x", 4, 6);
    const auto cn = build_cn(e);
    const auto ref = normalize(e.reference);
    ASSERT_EQ(lattice_min_errors(cn, ref), static_cast<std::size_t>(testing::brute_force_lattice_errors(cn, ref)));
  }
}

TEST(OracleInvariants, HoldOnRandomEntries) {
  testing::Generator g(33);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto e = g.entry("x", 5, 12);
    const auto r = oracle_row(e, {});
    ASSERT_LE(r.vocab_missing, r.nb_errors);
    ASSERT_LE(r.nb_errors, r.rank1_errors);
    ASSERT_LE(r.lattice_errors, r.rank1_errors);
    ASSERT_LE(r.vocab_missing, r.lattice_errors);

    // Adding a hypothesis never makes any oracle worse.
    auto more = e;
    more.hypotheses.push_back(join(g.tokens(0, 12)));
    const auto r2 = oracle_row(more, {});
    ASSERT_LE(r2.nb_errors, r.nb_errors);
    ASSERT_LE(r2.vocab_missing, r.vocab_missing);
    ASSERT_LE(r2.lattice_errors, r.rank1_errors);
  }
}

TEST(OracleReport, AggregatesRatiosOfSums) {
  std::vector<NBestEntry> es{entry({"a x", "a b"}, "a b"), entry({"p q r s"}, "p q r s")};
  es[1].id = "f";
  const auto rep = oracle_report(Corpus(std::move(es)), {}, OracleVariant::both, 2);
  EXPECT_EQ(rep.ref_len, 6u);
  EXPECT_DOUBLE_EQ(rep.baseline, 1.0 / 6.0);
  EXPECT_DOUBLE_EQ(rep.o_nb, 0.0);
  EXPECT_EQ(rep.rows[0].nb_rank, 2u);
  EXPECT_EQ(OracleRow::from_json(rep.rows[0].to_json()), rep.rows[0]);
}

}  // namespace
}  // namespace nbestgec
