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

#ifndef PDSUM_SYNTH_H_
#define PDSUM_SYNTH_H_

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pdsum/corpus.h"

namespace pdsum {

// Planted-theme vocabulary and document layout for the synthetic stream.
//
// Every set owns `core_phrases` lifelong bigrams and, per context,
// `fresh_phrases` bigrams that exist only in that context. A planted document
// carries a core sentence (two core bigrams) and/or a fresh sentence (all fresh
// bigrams of the context). Generic sentences are drawn from a small vocabulary
// shared by every set, filler sentences from a large shared background.
struct ThemeConfig {
  std::size_t core_phrases = 3;
  std::size_t fresh_phrases = 2;
  double plant_rate = 0.9;
  std::size_t generic_sentences = 2;
  std::size_t filler_sentences = 1;
  std::size_t generic_vocab = 24;
  std::size_t background_vocab = 400;
  std::size_t words_per_sentence = 8;
  // Explicit lifelong phrases per set; replaces the generated ones when non-empty.
  std::vector<std::vector<std::string>> core_override;
  Timestamp start = 1546300800;  // 2019-01-01T00:00:00Z

  void validate() const;
};

struct PlantedTruth {
  // (set_id, context index) -> planted phrases, lifelong first, then fresh.
  std::map<std::pair<std::string, std::int64_t>, std::vector<std::string>> phrases;
  // Every planted token of a set across all contexts.
  std::map<std::string, std::set<std::string>> tokens;

  const std::vector<std::string>& planted(const std::string& set_id,
                                          std::int64_t context) const;
  // True when every token of `phrase` is a planted token of the set.
  bool is_planted(const std::string& set_id, const std::string& phrase) const;
};

struct SyntheticStream {
  std::vector<Document> docs;  // sorted by (timestamp, doc_id)
  std::vector<ReferenceSummary> refs;
  PlantedTruth truth;
};

// Deterministic in (counts, theme, seed). One UTC day per context.
// Throws DataError when explicit phrases collide across sets or with the
// shared vocabularies.
SyntheticStream synth_stream(std::size_t n_sets, std::size_t docs_per_set_per_context,
                             std::size_t n_contexts, const ThemeConfig& theme,
                             std::uint64_t seed);

std::string corpus_to_jsonl(const std::vector<Document>& docs);
std::string references_to_jsonl(const std::vector<ReferenceSummary>& refs);

}  // namespace pdsum

#endif  // PDSUM_SYNTH_H_
