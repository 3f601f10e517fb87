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
#include <limits>

#include "fixtures.h"
#include "pdsum/binary_io.h"
#include "pdsum/embedding.h"
#include "pdsum/error.h"
#include "pdsum/prototype.h"
#include "pdsum/synth.h"

namespace pdsum {
namespace {

using testing::make_doc;

EmbeddingStore three_by_four() {
  EmbeddingStore s(4);
  s.insert("a", 0, {1, 2, 3, 4});
  s.insert("a", 1, {0.5f, -1, 0, 2});
  s.insert("b", 0, {0, 0, 1, 0});
  return s;
}

TEST(EmbeddingStore, LoadsJsonlRecords) {
  auto s = parse_embeddings(R"({"doc_id":"a","pos":0,"vec":[1,2,3,4]}
{"doc_id":"a","pos":1,"vec":[0.5,-1,0,2]}
{"doc_id":"b","pos":0,"vec":[0,0,1,0]}
)");
  EXPECT_EQ(s.dim(), 4u);
  EXPECT_EQ(s.size(), 3u);
  EXPECT_EQ(s, three_by_four());
}

TEST(EmbeddingStore, DimensionMismatchNamesBothRecords) {
  try {
    parse_embeddings(R"({"doc_id":"x","pos":0,"vec":[1,2,3]}
{"doc_id":"y","pos":2,"vec":[1,2,3,4]})");
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("(x,0)"), std::string::npos) << msg;
    EXPECT_NE(msg.find("(y,2)"), std::string::npos) << msg;
  }
}

TEST(EmbeddingStore, RejectsNonFiniteAndDuplicates) {
  EmbeddingStore s(2);
  EXPECT_THROW(s.insert("a", 0, {std::numeric_limits<float>::quiet_NaN(), 0}), DataError);
  EXPECT_THROW(s.insert("a", 0, {std::numeric_limits<float>::infinity(), 0}), DataError);
  s.insert("a", 0, {1, 2});
  EXPECT_THROW(s.insert("a", 0, {1, 2}), DataError);
  EXPECT_THROW(s.insert("a", 1, {1, 2, 3}), DataError);
}

TEST(EmbeddingStore, BinaryRoundTripIsBitExact) {
  EmbeddingStore s = three_by_four();
  s.insert("c", 7, {1e-30f, -3.4e38f, 0.1f, -0.0f});
  const std::string bytes = serialize_embeddings(s);
  EXPECT_EQ(bytes.substr(0, 4), "EMB1");
  EmbeddingStore back = parse_embeddings(bytes);
  EXPECT_EQ(back, s);
  EXPECT_EQ(serialize_embeddings(back), bytes);

  auto dir = testing::scratch_dir("emb");
  write_embedding_file(s, dir / "e.bin");
  EXPECT_EQ(load_embedding_file(dir / "e.bin"), s);
}

TEST(EmbeddingStore, BinaryLayoutMatchesDocumentedFormat) {
  EmbeddingStore s(2);
  s.insert("ab", 3, {1.0f, -2.0f});
  binary::Writer w;
  w.put_bytes("EMB1");
  w.put<std::uint32_t>(2);
  w.put<std::uint16_t>(2);
  w.put_bytes("ab");
  w.put<std::uint32_t>(3);
  w.put<float>(1.0f);
  w.put<float>(-2.0f);
  EXPECT_EQ(serialize_embeddings(s), w.data());
}

TEST(EmbeddingStore, TruncatedBinaryIsRejected) {
  std::string bytes = serialize_embeddings(three_by_four());
  bytes.pop_back();
  EXPECT_THROW(parse_embeddings(bytes), DataError);
}

TEST(EmbeddingStore, LookupReturnsRowsInPositionOrder) {
  EmbeddingStore s = three_by_four();
  Document d = make_doc("a", "s", 0, {"First one.", "Second one."});
  Eigen::MatrixXd m = s.lookup(d);
  ASSERT_EQ(m.rows(), 2);
  EXPECT_EQ(m(0, 3), 4.0);
  EXPECT_EQ(m(1, 0), 0.5);
  EXPECT_EQ(s.lookup(d), m);
}

TEST(EmbeddingStore, MissingSentenceIsNamed) {
  EmbeddingStore s(4);
  s.insert("docA", 0, {1, 0, 0, 0});
  Document d = make_doc("docA", "s", 0, {"One here.", "Two here."});
  try {
    s.lookup(d);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("(docA,1) absent"), std::string::npos) << e.what();
  }
}

TEST(HashEmbedder, DeterministicUnitNorm) {
  Sentence s = make_sentence("Storm Talas hits the coast.", 0);
  Eigen::VectorXd a = hash_embedder(s, 32, 5);
  EXPECT_EQ(a, hash_embedder(s, 32, 5));
  EXPECT_NEAR(a.norm(), 1.0, 1e-6);
  EXPECT_NE(a, hash_embedder(s, 32, 6));
  Eigen::VectorXd empty = hash_embedder(make_sentence("!", 0), 16, 5);
  EXPECT_NEAR(empty.norm(), 1.0, 1e-6);
  EXPECT_THROW(hash_embedder(s, 7, 5), UsageError);
}

TEST(HashEmbedder, DependsOnTokenMultisetOnly) {
  Eigen::VectorXd a = hash_embedder(make_sentence("storm hits coast", 0), 16, 1);
  Eigen::VectorXd b = hash_embedder(make_sentence("Coast, storm... HITS", 3), 16, 1);
  EXPECT_LT((a - b).norm(), 1e-12);
}

TEST(HashEmbedder, SameTopicPairsAreCloserOnSyntheticStreams) {
  SyntheticStream s = synth_stream(4, 12, 2, ThemeConfig{}, 11);
  std::vector<std::pair<std::string, const Sentence*>> pool;
  for (const Document& d : s.docs) {
    for (const Sentence& x : d.sentences) pool.emplace_back(d.set_id, &x);
  }
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  double same = 0.0, cross = 0.0;
  std::size_t n_same = 0, n_cross = 0;
  while (n_same < 1000 || n_cross < 1000) {
    const auto& a = pool[pick(rng)];
    const auto& b = pool[pick(rng)];
    if (a.second == b.second) continue;
    const bool same_set = a.first == b.first;
    if ((same_set && n_same == 1000) || (!same_set && n_cross == 1000)) continue;
    const double c = hash_embedder(*a.second, 64, 11).dot(hash_embedder(*b.second, 64, 11));
    if (same_set) {
      same += c;
      ++n_same;
    } else {
      cross += c;
      ++n_cross;
    }
  }
  EXPECT_GT(same / 1000.0, cross / 1000.0);
}

}  // namespace
}  // namespace pdsum
