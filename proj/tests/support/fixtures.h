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

#ifndef PDSUM_TESTS_FIXTURES_H_
#define PDSUM_TESTS_FIXTURES_H_

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pdsum/corpus.h"
#include "pdsum/encoder.h"
#include "pdsum/phrase.h"
#include "pdsum/trainer.h"

namespace pdsum::testing {

inline Document make_doc(std::string doc_id, std::string set_id, Timestamp ts,
                         const std::vector<std::string>& sentences) {
  Document d{std::move(doc_id), std::move(set_id), ts, {}};
  std::uint32_t pos = 0;
  for (const std::string& s : sentences) d.sentences.push_back(make_sentence(s, pos++));
  return d;
}

inline SetPhrases phrases(std::string set_id,
                          std::initializer_list<std::pair<std::string, double>> entries,
                          std::size_t capacity = 5) {
  SetPhrases sp{std::move(set_id), capacity, {}};
  for (const auto& [p, s] : entries) sp.entries.push_back({p, s});
  return sp;
}

inline Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng,
                                     double scale = 1.0) {
  std::normal_distribution<double> nd(0.0, scale);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = nd(rng);
  return m;
}

// Random micro-batch for gradient checks: docs of 2 to 4 sentences spread
// round-robin over `sets` prototypes.
inline MicroBatch random_micro_batch(std::uint64_t seed, Eigen::Index dim, std::size_t docs,
                                     std::size_t sets) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> len(2, 4);
  MicroBatch b;
  for (std::size_t j = 0; j < docs; ++j) {
    b.embeddings.push_back(random_matrix(len(rng), dim, rng));
    b.owners.push_back(j % sets);
  }
  for (std::size_t k = 0; k < sets; ++k) {
    b.prototypes.push_back(random_matrix(dim, 1, rng));
  }
  return b;
}

// Seeded encoder with small nonzero biases so every block carries gradient.
inline EncoderParams random_params(std::uint64_t seed, std::size_t dim, std::size_t heads = 2) {
  EncoderParams p = EncoderParams::initialize(dim, heads, seed);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> u(-0.1, 0.1);
  for (const auto& b : p.blocks()) {
    if (b.cols != 1 || b.name == "va") continue;
    for (std::size_t i = 0; i < b.rows; ++i) p.values()(static_cast<Eigen::Index>(b.offset + i)) += u(rng);
  }
  p.round_to_f32();
  return p;
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("pdsum-test-" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace pdsum::testing

#endif  // PDSUM_TESTS_FIXTURES_H_
