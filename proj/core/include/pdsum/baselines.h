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

#ifndef PDSUM_BASELINES_H_
#define PDSUM_BASELINES_H_

#include <cstdint>
#include <span>
#include <string>

#include <Eigen/Dense>

#include "pdsum/corpus.h"
#include "pdsum/embedding.h"
#include "pdsum/summary.h"

namespace pdsum {

enum class CentroidMode { kSentence, kDocument };

// Running center of a set and the number of units (sentences or documents)
// folded into it.
struct CentroidState {
  std::string set_id;
  Eigen::VectorXd center;
  std::uint64_t count = 0;

  bool operator==(const CentroidState& other) const;
};

struct CentroidResult {
  Summary summary;
  CentroidState state;
};

// SentCent / DocCent, and their incremental variants when `incremental` is
// set and `previous` holds the set's earlier center. Returns the sentences
// closest (cosine) to the center, ties by (doc_id, position).
CentroidResult centroid_summarize(const std::string& set_id, std::int64_t context_id,
                                  std::span<const Document> docs, CentroidMode mode,
                                  bool incremental, const CentroidState* previous,
                                  const SentenceEmbedder& embedder, const SummarySize& size);

}  // namespace pdsum

#endif  // PDSUM_BASELINES_H_
