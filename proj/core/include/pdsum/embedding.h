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

#ifndef PDSUM_EMBEDDING_H_
#define PDSUM_EMBEDDING_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pdsum/corpus.h"

namespace pdsum {

// Precomputed sentence vectors keyed by (doc_id, sentence position).
// Immutable once loaded; safe for concurrent readers.
class EmbeddingStore {
 public:
  using Key = std::pair<std::string, std::uint32_t>;

  EmbeddingStore() = default;
  explicit EmbeddingStore(std::size_t dim);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return vectors_.size(); }
  const std::map<Key, std::vector<float>>& records() const { return vectors_; }

  // Rejects wrong length, non-finite components and duplicate keys.
  void insert(std::string doc_id, std::uint32_t position, std::vector<float> vec);
  const std::vector<float>* find(const std::string& doc_id, std::uint32_t position) const;

  // |d| x dim, row k = sentence at position k. Throws DataError "(doc,pos) absent".
  Eigen::MatrixXd lookup(const Document& doc) const;

  bool operator==(const EmbeddingStore&) const = default;

 private:
  std::size_t dim_ = 0;
  std::map<Key, std::vector<float>> vectors_;
};

// Binary "EMB1" files, with a JSONL fallback detected by the missing magic.
EmbeddingStore load_embedding_file(const std::filesystem::path& path);
EmbeddingStore parse_embeddings(std::string_view bytes);
void write_embedding_file(const EmbeddingStore& store, const std::filesystem::path& path);
std::string serialize_embeddings(const EmbeddingStore& store);

// Test embedder: the L2-normalized sum of one seeded pseudo-random unit
// direction per token. Sentences sharing tokens have correlated vectors.
Eigen::VectorXd hash_embedder(const Sentence& sentence, std::size_t dim, std::uint64_t seed);

// Source of initial sentence representations for a document.
class SentenceEmbedder {
 public:
  virtual ~SentenceEmbedder() = default;
  virtual std::size_t dim() const = 0;
  virtual Eigen::MatrixXd embed(const Document& doc) const = 0;
};

class StoreEmbedder final : public SentenceEmbedder {
 public:
  explicit StoreEmbedder(const EmbeddingStore& store) : store_(store) {}
  std::size_t dim() const override { return store_.dim(); }
  Eigen::MatrixXd embed(const Document& doc) const override { return store_.lookup(doc); }

 private:
  const EmbeddingStore& store_;
};

class HashEmbedder final : public SentenceEmbedder {
 public:
  HashEmbedder(std::size_t dim, std::uint64_t seed);
  std::size_t dim() const override { return dim_; }
  Eigen::MatrixXd embed(const Document& doc) const override;

 private:
  std::size_t dim_;
  std::uint64_t seed_;
};

}  // namespace pdsum

#endif  // PDSUM_EMBEDDING_H_
