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

#include "pdsum/baselines.h"

#include <algorithm>

#include "pdsum/error.h"
#include "pdsum/prototype.h"

namespace pdsum {

bool CentroidState::operator==(const CentroidState& other) const {
  return set_id == other.set_id && count == other.count && center.size() == other.center.size() &&
         (center.array() == other.center.array()).all();
}

CentroidResult centroid_summarize(const std::string& set_id, std::int64_t context_id,
                                  std::span<const Document> docs, CentroidMode mode,
                                  bool incremental, const CentroidState* previous,
                                  const SentenceEmbedder& embedder, const SummarySize& size) {
  if (docs.empty()) throw DataError("set '" + set_id + "' has no documents");
  std::vector<Eigen::MatrixXd> embs;
  embs.reserve(docs.size());
  for (const Document& d : docs) embs.push_back(embedder.embed(d));

  const auto dim = static_cast<Eigen::Index>(embedder.dim());
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(dim);
  std::uint64_t units = 0;
  for (const Eigen::MatrixXd& e : embs) {
    if (mode == CentroidMode::kSentence) {
      sum += e.colwise().sum().transpose();
      units += static_cast<std::uint64_t>(e.rows());
    } else {
      sum += e.colwise().mean().transpose();
      ++units;
    }
  }
  CentroidState state{set_id, sum / static_cast<double>(units), units};
  if (incremental && previous != nullptr && previous->count > 0) {
    if (previous->center.size() != dim) throw DataError("centroid state dim mismatch");
    const auto n1 = static_cast<double>(previous->count);
    const auto n2 = static_cast<double>(units);
    state.center = (n1 * previous->center + n2 * state.center) / (n1 + n2);
    state.count = previous->count + units;
  }

  std::vector<ScoredSentence> scored;
  for (std::size_t j = 0; j < docs.size(); ++j) {
    for (std::size_t k = 0; k < docs[j].sentences.size(); ++k) {
      Eigen::VectorXd v = embs[j].row(static_cast<Eigen::Index>(k)).transpose();
      scored.push_back({&docs[j], &docs[j].sentences[k], cosine(v, state.center)});
    }
  }
  std::sort(scored.begin(), scored.end(), [](const ScoredSentence& a, const ScoredSentence& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.doc->doc_id != b.doc->doc_id) return a.doc->doc_id < b.doc->doc_id;
    return a.sentence->position < b.sentence->position;
  });
  CentroidResult out;
  out.summary = take_summary(set_id, context_id, scored, size);
  out.state = std::move(state);
  return out;
}

}  // namespace pdsum
