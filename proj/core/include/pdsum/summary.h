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

#ifndef PDSUM_SUMMARY_H_
#define PDSUM_SUMMARY_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pdsum/corpus.h"
#include "pdsum/phrase.h"
#include "pdsum/trainer.h"

namespace pdsum {

struct SummarySentence {
  std::string doc_id;
  std::uint32_t position = 0;
  std::string text;
  std::vector<std::string> tokens;
  double score = 0.0;

  bool operator==(const SummarySentence&) const = default;
};

struct Summary {
  std::string set_id;
  std::int64_t context_id = 0;
  std::vector<SummarySentence> sentences;  // descending score
  std::size_t token_count = 0;

  // Concatenated tokens of the selected sentences, in order.
  std::vector<std::string> tokens() const;
};

// Either the top `sentences` sentences or, when `tokens` > 0, a greedy fill
// of that token budget (the best sentence is always kept).
struct SummarySize {
  std::size_t sentences = 1;
  std::size_t tokens = 0;

  void validate() const;
};

struct SentenceScore {
  double doc_level = 0.0;       // f_d
  double sentence_level = 0.0;  // f_s
  double phrase_level = 0.0;    // f_p
  double total = 0.0;           // f_d * f_s * f_p
};

// gamma * exp(cos(cd, R)) + (1 - gamma) * exp(cos(cd, R_T)).
double doc_level_score(const Eigen::VectorXd& cd, const Eigen::VectorXd& accumulated,
                       const Eigen::VectorXd& fresh, double gamma);

// Share of the document's phrase mass held by the sentence, blended over the
// accumulated and new phrase sets. A zero-mass document gives 1/|d|.
double phrase_level_score(const Sentence& sentence, const Document& doc,
                          const SetPhrases& accumulated, const SetPhrases& fresh, double gamma);

// Same, with the document masses precomputed.
double phrase_level_score(const Sentence& sentence, std::size_t doc_sentences,
                          double doc_mass_accumulated, double doc_mass_fresh,
                          const SetPhrases& accumulated, const SetPhrases& fresh, double gamma);

SentenceScore score_sentence(const Sentence& sentence, const Document& doc,
                             const Eigen::VectorXd& cd, double alpha,
                             const Eigen::VectorXd& accumulated_prototype,
                             const Eigen::VectorXd& fresh_prototype,
                             const SetPhrases& accumulated, const SetPhrases& fresh, double gamma);

struct ScoredSentence {
  const Document* doc = nullptr;
  const Sentence* sentence = nullptr;
  double score = 0.0;
};

// Sorted by descending score; ties go to the earlier document timestamp, then
// the lower doc_id, then the lower sentence position.
Summary select_summary(const std::string& set_id, std::int64_t context_id,
                       std::vector<ScoredSentence> scored, const SummarySize& size);

// Takes sentences from an already ordered list according to `size`.
Summary take_summary(const std::string& set_id, std::int64_t context_id,
                     const std::vector<ScoredSentence>& ordered, const SummarySize& size);

// Scores every sentence of a set with its trained encoding and selects.
Summary summarize_set(const std::string& set_id, std::int64_t context_id,
                      std::span<const Document> docs, const SetEncoding& encoding,
                      const SetPhrases& accumulated, const SetPhrases& fresh, double gamma,
                      const SummarySize& size);

// {"set_id","context_id","sentences":[{"doc_id","pos","text","score"}],"gamma":g,"method":m}
std::string summary_to_json_line(const Summary& summary, const std::string& method,
                                 std::optional<double> gamma);

}  // namespace pdsum

#endif  // PDSUM_SUMMARY_H_
