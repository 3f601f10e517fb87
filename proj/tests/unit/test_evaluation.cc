// Copyright 2026 The pdsum Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.h"
#include "pdsum/error.h"
#include "pdsum/evaluation.h"
#include "pdsum/text.h"

namespace pdsum {
namespace {

Tokens toks(const char* s) { return tokenize(s); }

const RougeMetric kR1(RougeMetric::Kind::kR1);
const RougeMetric kR2(RougeMetric::Kind::kR2);
const RougeMetric kRL(RougeMetric::Kind::kRL);

// Scores summaries by a lookup table so criterion formulas can be checked exactly.
class TableMetric final : public Metric {
 public:
  explicit TableMetric(std::map<Tokens, double> table) : table_(std::move(table)) {}
  std::string_view name() const override { return "T"; }
  double score(const Tokens&, const Tokens& reference) const override { return table_.at(reference); }

 private:
  std::map<Tokens, double> table_;
};

TEST(RougeN, IdenticalSequencesScoreOne) {
  Tokens t = toks("storm talas hits the coast");
  EXPECT_DOUBLE_EQ(rouge_n(t, t, 1).f1, 1.0);
  EXPECT_DOUBLE_EQ(rouge_n(t, t, 2).f1, 1.0);
}

TEST(RougeN, HandCountedExamples) {
  RougeScore r1 = rouge_n(toks("the cat"), toks("the dog"), 1);
  EXPECT_DOUBLE_EQ(r1.precision, 0.5);
  EXPECT_DOUBLE_EQ(r1.recall, 0.5);
  EXPECT_DOUBLE_EQ(r1.f1, 0.5);
  EXPECT_DOUBLE_EQ(rouge_n(toks("the cat"), toks("the dog"), 2).f1, 0.0);
  RougeScore clip = rouge_n({"aa", "aa", "aa"}, {"aa"}, 1);
  EXPECT_DOUBLE_EQ(clip.precision, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(clip.recall, 1.0);
  EXPECT_DOUBLE_EQ(clip.f1, 0.5);
}

TEST(RougeN, EmptyInputsAndBadOrder) {
  EXPECT_DOUBLE_EQ(rouge_n({}, toks("storm"), 1).f1, 0.0);
  EXPECT_DOUBLE_EQ(rouge_n(toks("storm"), {}, 1).f1, 0.0);
  EXPECT_DOUBLE_EQ(rouge_n(toks("storm"), toks("storm"), 2).f1, 0.0);
  EXPECT_THROW(rouge_n(toks("storm"), toks("storm"), 3), UsageError);
}

TEST(RougeL, HandExamples) {
  EXPECT_DOUBLE_EQ(rouge_l(toks("storm hits coast"), toks("storm hits coast")).f1, 1.0);
  RougeScore r = rouge_l({"a", "b", "c", "d"}, {"a", "c", "d", "b"});
  EXPECT_DOUBLE_EQ(r.precision, 0.75);
  EXPECT_DOUBLE_EQ(r.recall, 0.75);
  EXPECT_DOUBLE_EQ(r.f1, 0.75);
  EXPECT_DOUBLE_EQ(rouge_l(toks("aa bb"), toks("cc dd")).f1, 0.0);
  EXPECT_DOUBLE_EQ(rouge_l({}, {}).f1, 0.0);
}

TEST(Rouge, MatchesBruteForceOraclesAndSymmetry) {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> len(0, 12), word(0, 4);
  for (int trial = 0; trial < 300; ++trial) {
    Tokens c, r;
    for (int i = len(rng); i > 0; --i) c.push_back(std::string(1, static_cast<char>('a' + word(rng))));
    for (int i = len(rng); i > 0; --i) r.push_back(std::string(1, static_cast<char>('a' + word(rng))));
    for (int n : {1, 2}) {
      RougeScore got = rouge_n(c, r, n);
      testing::Prf want = testing::brute_rouge_n(c, r, static_cast<std::size_t>(n));
      EXPECT_EQ(got.precision, want.p);
      EXPECT_EQ(got.recall, want.r);
      EXPECT_EQ(got.f1, want.f);
      RougeScore swapped = rouge_n(r, c, n);
      EXPECT_EQ(swapped.precision, got.recall);
      EXPECT_EQ(swapped.recall, got.precision);
    }
    RougeScore l = rouge_l(c, r);
    testing::Prf want = testing::brute_rouge_l(c, r);
    EXPECT_EQ(l.precision, want.p);
    EXPECT_EQ(l.recall, want.r);
    EXPECT_EQ(l.f1, want.f);
    EXPECT_GE(l.f1, 0.0);
    EXPECT_LE(l.f1, 1.0);
    if (!c.empty()) {
      EXPECT_DOUBLE_EQ(rouge_l(c, c).f1, 1.0);
    }
  }
}

TEST(TokenDiff, MultisetDifferenceKeepsOrder) {
  Tokens s = {"a", "b", "a", "c"};
  EXPECT_TRUE(token_diff(s, s).empty());
  EXPECT_EQ(token_diff(s, {}), s);
  EXPECT_EQ(token_diff(s, {"a"}), (Tokens{"b", "a", "c"}));
  EXPECT_EQ(token_diff(s, {"a", "a", "a", "z"}), (Tokens{"b", "c"}));
}

TEST(TokenDiff, SizeAccounting) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> len(0, 10), word(0, 3);
  for (int trial = 0; trial < 100; ++trial) {
    Tokens s, p;
    for (int i = len(rng); i > 0; --i) s.push_back(std::string(1, static_cast<char>('a' + word(rng))));
    for (int i = len(rng); i > 0; --i) p.push_back(std::string(1, static_cast<char>('a' + word(rng))));
    const Tokens d = token_diff(s, p);
    std::size_t matched = 0;
    for (char ch = 'a'; ch <= 'd'; ++ch) {
      const std::string w(1, ch);
      matched += std::min(std::count(s.begin(), s.end(), w), std::count(p.begin(), p.end(), w));
    }
    EXPECT_EQ(d.size() + matched, s.size());
  }
}

TEST(Criteria, RelevanceAndNovelty) {
  Tokens s = toks("storm hits coast"), g = toks("storm hits coast");
  EXPECT_DOUBLE_EQ(score_relevance(s, g, kR1), 1.0);
  EXPECT_DOUBLE_EQ(score_novelty(s, s, g, kR1), 0.0);
  EXPECT_DOUBLE_EQ(score_novelty(s, {}, g, kR1), 1.0);
}

TEST(Criteria, DistinctivenessFormula) {
  const Tokens own = {"own"}, other = {"other"};
  TableMetric m({{own, 0.5}, {other, 0.25}});
  Distinctiveness d = score_distinctiveness({"x"}, own, {other}, m);
  ASSERT_TRUE(d.value.has_value());
  EXPECT_DOUBLE_EQ(*d.value, 1.5);
  EXPECT_FALSE(d.clamped);
}

TEST(Criteria, DistinctivenessIsOneWhenAllScoresTie) {
  const Tokens own = {"own"}, o1 = {"o1"}, o2 = {"o2"};
  TableMetric m({{own, 0.3}, {o1, 0.3}, {o2, 0.3}});
  EXPECT_EQ(*score_distinctiveness({"x"}, own, {o1, o2}, m).value, 1.0);
}

TEST(Criteria, PerfectMatchClampsAndNoOthersIsNull) {
  Tokens s = toks("storm hits coast");
  Distinctiveness d = score_distinctiveness(s, s, {toks("quake strikes city")}, kR1);
  EXPECT_TRUE(d.clamped);
  EXPECT_DOUBLE_EQ(*d.value, 1.0 / kDistinctivenessClamp);
  EXPECT_FALSE(score_distinctiveness(s, s, {}, kR1).value.has_value());
}

TEST(Aggregate, SingleRowAndTwoRows) {
  Aggregate one = summarize_values("R1", "relevance", {0.7});
  EXPECT_EQ(one.mean, 0.7);
  EXPECT_EQ(one.stderr_, 0.0);
  Aggregate two = summarize_values("R1", "relevance", {0.2, 0.4});
  EXPECT_NEAR(two.mean, 0.3, 1e-15);
  EXPECT_NEAR(two.stderr_, 0.1, 1e-15);
  EXPECT_EQ(two.n, 2u);
}

TEST(Aggregate, NullDistinctivenessIsExcluded) {
  std::vector<EvalInput> solo = {{"A", 0, toks("storm hits"), {}, toks("storm hits coast")}};
  std::vector<EvalInput> pair = {{"A", 1, toks("storm hits"), toks("storm"), toks("storm coast")},
                                 {"B", 1, toks("quake city"), {}, toks("quake strikes")}};
  auto metrics = default_metrics();
  std::vector<EvalRow> rows = evaluate_context(solo, metrics);
  auto more = evaluate_context(pair, metrics);
  rows.insert(rows.end(), more.begin(), more.end());
  EvalReport rep = aggregate(rows);
  EXPECT_EQ(rep.find("R1", "relevance")->n, 3u);
  EXPECT_EQ(rep.find("R1", "distinctiveness")->n, 2u);
  EXPECT_EQ(rep.find("novel_token_ratio", "novelty")->n, 3u);
  // Aggregates agree with recomputation from rows.
  double sum = 0.0;
  for (const EvalRow& r : rep.rows) sum += r.scores.at("RL").relevance;
  EXPECT_NEAR(rep.find("RL", "relevance")->mean, sum / 3.0, 1e-15);
  EXPECT_NEAR(rep.rows[1].novel_token_ratio, 0.5, 1e-15);
}

TEST(Report, CsvAndJsonShapes) {
  std::vector<EvalInput> pair = {{"A", 0, toks("storm hits"), {}, toks("storm coast")},
                                 {"B", 0, toks("quake city"), {}, toks("quake strikes")}};
  EvalReport rep = aggregate(evaluate_context(pair, default_metrics()));
  const std::string csv = report_to_csv(rep);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "metric,criterion,mean,stderr,n");
  EXPECT_NE(csv.find("R1,relevance,0.5,0,2"), std::string::npos) << csv;
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 11);
  const std::string json = report_to_json(rep);
  EXPECT_NE(json.find("\"rows\""), std::string::npos);
  EXPECT_NE(json.find("\"aggregates\""), std::string::npos);
}

}  // namespace
}  // namespace pdsum
