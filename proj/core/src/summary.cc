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

#include "pdsum/summary.h"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "pdsum/error.h"
#include "pdsum/prototype.h"

namespace pdsum {

std::vector<std::string> Summary::tokens() const {
  std::vector<std::string> out;
  for (const auto& s : sentences) out.insert(out.end(), s.tokens.begin(), s.tokens.end());
  return out;
}

void SummarySize::validate() const {
  if (sentences < 1 && tokens < 1) throw UsageError("summary size must be positive");
}

double doc_level_score(const Eigen::VectorXd& cd, const Eigen::VectorXd& accumulated,
                       const Eigen::VectorXd& fresh, double gamma) {
  return gamma * std::exp(cosine(cd, accumulated)) +
         (1.0 - gamma) * std::exp(cosine(cd, fresh));
}

double phrase_level_score(const Sentence& sentence, std::size_t doc_sentences,
                          double doc_mass_accumulated, double doc_mass_fresh,
                          const SetPhrases& accumulated, const SetPhrases& fresh, double gamma) {
  const double uniform = 1.0 / static_cast<double>(doc_sentences);
  auto share = [&](const SetPhrases& phrases, double doc_mass) {
    return doc_mass > 0.0 ? phrase_mass(sentence, phrases) / doc_mass : uniform;
  };
  return gamma * share(accumulated, doc_mass_accumulated) +
         (1.0 - gamma) * share(fresh, doc_mass_fresh);
}

double phrase_level_score(const Sentence& sentence, const Document& doc,
                          const SetPhrases& accumulated, const SetPhrases& fresh, double gamma) {
  return phrase_level_score(sentence, doc.sentences.size(), phrase_mass(doc, accumulated),
                            phrase_mass(doc, fresh), accumulated, fresh, gamma);
}

SentenceScore score_sentence(const Sentence& sentence, const Document& doc,
                             const Eigen::VectorXd& cd, double alpha,
                             const Eigen::VectorXd& accumulated_prototype,
                             const Eigen::VectorXd& fresh_prototype,
                             const SetPhrases& accumulated, const SetPhrases& fresh, double gamma) {
  SentenceScore s;
  s.doc_level = doc_level_score(cd, accumulated_prototype, fresh_prototype, gamma);
  s.sentence_level = alpha;
  s.phrase_level = phrase_level_score(sentence, doc, accumulated, fresh, gamma);
  s.total = s.doc_level * s.sentence_level * s.phrase_level;
  return s;
}

Summary select_summary(const std::string& set_id, std::int64_t context_id,
                       std::vector<ScoredSentence> scored, const SummarySize& size) {
  size.validate();
  if (scored.empty()) throw DataError("set '" + set_id + "' has no sentences to summarize");
  std::sort(scored.begin(), scored.end(), [](const ScoredSentence& a, const ScoredSentence& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.doc->timestamp != b.doc->timestamp) return a.doc->timestamp < b.doc->timestamp;
    if (a.doc->doc_id != b.doc->doc_id) return a.doc->doc_id < b.doc->doc_id;
    return a.sentence->position < b.sentence->position;
  });
  return take_summary(set_id, context_id, scored, size);
}

Summary take_summary(const std::string& set_id, std::int64_t context_id,
                     const std::vector<ScoredSentence>& ordered, const SummarySize& size) {
  size.validate();
  if (ordered.empty()) throw DataError("set '" + set_id + "' has no sentences to summarize");
  Summary out;
  out.set_id = set_id;
  out.context_id = context_id;
  auto take = [&](const ScoredSentence& s) {
    out.sentences.push_back(
        {s.doc->doc_id, s.sentence->position, s.sentence->text, s.sentence->tokens, s.score});
    out.token_count += s.sentence->tokens.size();
  };
  if (size.tokens > 0) {
    for (const ScoredSentence& s : ordered) {
      if (out.sentences.empty() || out.token_count + s.sentence->tokens.size() <= size.tokens) {
        take(s);
      }
    }
  } else {
    for (std::size_t i = 0; i < ordered.size() && i < size.sentences; ++i) take(ordered[i]);
  }
  return out;
}

Summary summarize_set(const std::string& set_id, std::int64_t context_id,
                      std::span<const Document> docs, const SetEncoding& encoding,
                      const SetPhrases& accumulated, const SetPhrases& fresh, double gamma,
                      const SummarySize& size) {
  if (docs.size() != encoding.docs.size()) {
    throw DataError("encoding of set '" + set_id + "' does not match its documents");
  }
  std::vector<ScoredSentence> scored;
  for (std::size_t j = 0; j < docs.size(); ++j) {
    const Document& doc = docs[j];
    const DocumentEncoding& enc = encoding.docs[j];
    const double f_d = doc_level_score(enc.cd, encoding.prototype.accumulated,
                                       encoding.prototype.fresh, gamma);
    const double mass_acc = phrase_mass(doc, accumulated);
    const double mass_new = phrase_mass(doc, fresh);
    for (std::size_t k = 0; k < doc.sentences.size(); ++k) {
      const Sentence& s = doc.sentences[k];
      const double f_p = phrase_level_score(s, doc.sentences.size(), mass_acc, mass_new,
                                            accumulated, fresh, gamma);
      const double f_s = enc.alpha(static_cast<Eigen::Index>(k));
      scored.push_back({&doc, &s, f_d * f_s * f_p});
    }
  }
  return select_summary(set_id, context_id, std::move(scored), size);
}

std::string summary_to_json_line(const Summary& summary, const std::string& method,
                                 std::optional<double> gamma) {
  nlohmann::json sentences = nlohmann::json::array();
  for (const auto& s : summary.sentences) {
    sentences.push_back({{"doc_id", s.doc_id}, {"pos", s.position}, {"text", s.text},
                         {"score", s.score}});
  }
  nlohmann::json obj = {{"set_id", summary.set_id},
                        {"context_id", summary.context_id},
                        {"sentences", std::move(sentences)},
                        {"method", method}};
  if (gamma) obj["gamma"] = *gamma;
  return obj.dump();
}

}  // namespace pdsum
