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

#include "pdsum/embedding.h"

#include <cmath>
#include <random>

#include <nlohmann/json.hpp>

#include "pdsum/binary_io.h"
#include "pdsum/error.h"
#include "pdsum/rng.h"

namespace pdsum {
namespace {

constexpr std::string_view kMagic = "EMB1";

std::string key_name(const std::string& doc_id, std::uint32_t pos) {
  return "(" + doc_id + "," + std::to_string(pos) + ")";
}

EmbeddingStore parse_binary(std::string_view bytes) {
  binary::Reader in(bytes, "embedding file");
  in.get_bytes(kMagic.size());
  auto dim = in.get<std::uint32_t>();
  if (dim == 0) throw DataError("embedding file declares dim 0");
  EmbeddingStore store(dim);
  while (!in.done()) {
    std::string doc_id = in.get_string16();
    auto pos = in.get<std::uint32_t>();
    std::vector<float> vec(dim);
    for (float& v : vec) v = in.get<float>();
    store.insert(std::move(doc_id), pos, std::move(vec));
  }
  return store;
}

EmbeddingStore parse_jsonl(std::string_view text) {
  EmbeddingStore store;
  std::string first_id;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw DataError("embedding line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!obj.is_object() || !obj.contains("doc_id") || !obj.contains("pos") ||
        !obj.contains("vec") || !obj["vec"].is_array()) {
      throw DataError("embedding line " + std::to_string(line_no) +
                      ": expected {doc_id, pos, vec}");
    }
    std::string doc_id = obj["doc_id"].get<std::string>();
    auto p = obj["pos"].get<std::uint32_t>();
    std::vector<float> vec;
    for (const auto& v : obj["vec"]) {
      if (!v.is_number()) {
        throw DataError("embedding record " + key_name(doc_id, p) + " has a non-numeric component");
      }
      vec.push_back(v.get<float>());
    }
    if (store.size() == 0) {
      if (vec.empty()) throw DataError("embedding record " + key_name(doc_id, p) + " is empty");
      store = EmbeddingStore(vec.size());
      first_id = key_name(doc_id, p);
    } else if (vec.size() != store.dim()) {
      throw DataError("embedding dimension mismatch: record " + first_id + " has " +
                      std::to_string(store.dim()) + " components but record " +
                      key_name(doc_id, p) + " has " + std::to_string(vec.size()));
    }
    store.insert(std::move(doc_id), p, std::move(vec));
  }
  return store;
}

}  // namespace

EmbeddingStore::EmbeddingStore(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw DataError("embedding dim must be positive");
}

void EmbeddingStore::insert(std::string doc_id, std::uint32_t position, std::vector<float> vec) {
  if (vec.size() != dim_) {
    throw DataError("embedding " + key_name(doc_id, position) + " has " +
                    std::to_string(vec.size()) + " components, expected " + std::to_string(dim_));
  }
  for (float v : vec) {
    if (!std::isfinite(v)) {
      throw DataError("embedding " + key_name(doc_id, position) + " has a non-finite component");
    }
  }
  std::string name = key_name(doc_id, position);
  auto [it, inserted] = vectors_.emplace(Key{std::move(doc_id), position}, std::move(vec));
  if (!inserted) throw DataError("duplicate embedding record " + name);
}

const std::vector<float>* EmbeddingStore::find(const std::string& doc_id,
                                               std::uint32_t position) const {
  auto it = vectors_.find(Key{doc_id, position});
  return it == vectors_.end() ? nullptr : &it->second;
}

Eigen::MatrixXd EmbeddingStore::lookup(const Document& doc) const {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(doc.sentences.size()),
                      static_cast<Eigen::Index>(dim_));
  for (std::size_t k = 0; k < doc.sentences.size(); ++k) {
    const std::vector<float>* v = find(doc.doc_id, doc.sentences[k].position);
    if (v == nullptr) {
      throw DataError(key_name(doc.doc_id, doc.sentences[k].position) + " absent");
    }
    for (std::size_t c = 0; c < dim_; ++c) {
      out(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(c)) = (*v)[c];
    }
  }
  return out;
}

EmbeddingStore parse_embeddings(std::string_view bytes) {
  if (bytes.substr(0, kMagic.size()) == kMagic) return parse_binary(bytes);
  return parse_jsonl(bytes);
}

EmbeddingStore load_embedding_file(const std::filesystem::path& path) {
  std::string bytes = binary::read_binary_file(path.string());
  try {
    return parse_embeddings(bytes);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::string serialize_embeddings(const EmbeddingStore& store) {
  binary::Writer out;
  out.put_bytes(kMagic);
  out.put<std::uint32_t>(static_cast<std::uint32_t>(store.dim()));
  for (const auto& [key, vec] : store.records()) {
    out.put_string16(key.first);
    out.put<std::uint32_t>(key.second);
    for (float v : vec) out.put<float>(v);
  }
  return out.take();
}

void write_embedding_file(const EmbeddingStore& store, const std::filesystem::path& path) {
  binary::write_binary_file(path.string(), serialize_embeddings(store));
}

Eigen::VectorXd hash_embedder(const Sentence& sentence, std::size_t dim, std::uint64_t seed) {
  if (dim < 8) throw UsageError("hash embedder needs dim >= 8");
  const auto n = static_cast<Eigen::Index>(dim);
  auto direction = [&](std::string_view token) {
    Rng rng(derive_seed(seed, token));
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = normal(rng);
    return Eigen::VectorXd(v / v.norm());
  };
  if (sentence.tokens.empty()) return direction("");
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(n);
  for (const std::string& t : sentence.tokens) sum += direction(t);
  double norm = sum.norm();
  // Only reachable with exactly cancelling directions; fall back to the empty key.
  if (norm == 0.0) return direction("");
  return sum / norm;
}

HashEmbedder::HashEmbedder(std::size_t dim, std::uint64_t seed) : dim_(dim), seed_(seed) {
  if (dim < 8) throw UsageError("hash embedder needs dim >= 8");
}

Eigen::MatrixXd HashEmbedder::embed(const Document& doc) const {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(doc.sentences.size()),
                      static_cast<Eigen::Index>(dim_));
  for (std::size_t k = 0; k < doc.sentences.size(); ++k) {
    out.row(static_cast<Eigen::Index>(k)) = hash_embedder(doc.sentences[k], dim_, seed_).transpose();
  }
  return out;
}

}  // namespace pdsum
