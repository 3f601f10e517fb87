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

#ifndef PDSUM_PHRASE_H_
#define PDSUM_PHRASE_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "pdsum/corpus.h"

namespace pdsum {

// Occurrence counts of unigram and bigram phrases. Ordered for determinism.
using PhraseCounts = std::map<std::string, std::size_t>;

struct PhraseEntry {
  std::string phrase;
  double score = 0.0;

  bool operator==(const PhraseEntry&) const = default;
};

// Top phrases of one set, sorted by descending score then ascending phrase.
struct SetPhrases {
  std::string set_id;
  std::size_t capacity = 0;
  std::vector<PhraseEntry> entries;

  bool operator==(const SetPhrases&) const = default;
};

struct PhraseIndex {
  std::map<std::string, PhraseCounts> term_frequency;  // per set
  PhraseCounts set_frequency;                           // sets containing the phrase
  std::size_t set_count = 0;
};

inline constexpr std::size_t kDefaultTopPhrases = 5;

// Unigrams that are not stopwords and bigrams whose tokens are both not
// stopwords, over windows that never cross a sentence boundary.
PhraseCounts extract_candidates(const Sentence& sentence);
PhraseCounts extract_candidates(const Document& doc);

PhraseIndex build_phrase_index(const ContextBatch& context);

// TFIDF per set: tf = occurrences in the set, idf = ln(sets / sets containing).
// Zero scores are dropped; a single-set context ranks by raw tf.
std::map<std::string, SetPhrases> rank_set_phrases(const ContextBatch& context,
                                                   std::size_t top_n);

// Union with summed scores, re-ranked and cut to top_n.
SetPhrases accumulate_phrases(const SetPhrases& acc, const SetPhrases& fresh,
                              std::size_t top_n);

// Sum over entries of occurrences(phrase in unit) * score.
double phrase_mass(const Sentence& sentence, const SetPhrases& phrases);
double phrase_mass(const Document& doc, const SetPhrases& phrases);
double phrase_mass(std::span<const Document> docs, const SetPhrases& phrases);

// {"set_id","context_id","phrases":[[p,score],...]}
std::string phrases_debug_line(const SetPhrases& phrases, std::int64_t context_id);

}  // namespace pdsum

#endif  // PDSUM_PHRASE_H_
