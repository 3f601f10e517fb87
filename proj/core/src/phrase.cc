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

#include "pdsum/phrase.h"

#include <algorithm>
#include <cmath>
#include <string_view>

#include <nlohmann/json.hpp>

#include "pdsum/error.h"
#include "pdsum/text.h"

namespace pdsum {
namespace {

void add_candidates(const Sentence& sentence, PhraseCounts& out) {
  const auto& t = sentence.tokens;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (is_stopword(t[i])) continue;
    ++out[t[i]];
    if (i + 1 < t.size() && !is_stopword(t[i + 1])) ++out[join_bigram(t[i], t[i + 1])];
  }
}

void sort_entries(std::vector<PhraseEntry>& entries) {
  std::sort(entries.begin(), entries.end(), [](const PhraseEntry& a, const PhraseEntry& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.phrase < b.phrase;
  });
}

std::size_t count_occurrences(const std::vector<std::string>& tokens, std::string_view phrase) {
  std::size_t n = 0;
  std::size_t space = phrase.find(' ');
  if (space == std::string_view::npos) {
    for (const auto& t : tokens) n += (t == phrase);
    return n;
  }
  std::string_view first = phrase.substr(0, space);
  std::string_view second = phrase.substr(space + 1);
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
    n += (tokens[i] == first && tokens[i + 1] == second);
  }
  return n;
}

}  // namespace

PhraseCounts extract_candidates(const Sentence& sentence) {
  PhraseCounts out;
  add_candidates(sentence, out);
  return out;
}

PhraseCounts extract_candidates(const Document& doc) {
  PhraseCounts out;
  for (const Sentence& s : doc.sentences) add_candidates(s, out);
  return out;
}

PhraseIndex build_phrase_index(const ContextBatch& context) {
  PhraseIndex index;
  index.set_count = context.sets.size();
  for (const auto& [set_id, docs] : context.sets) {
    PhraseCounts& tf = index.term_frequency[set_id];
    for (const Document& d : docs) {
      for (const Sentence& s : d.sentences) add_candidates(s, tf);
    }
    for (const auto& [phrase, count] : tf) ++index.set_frequency[phrase];
  }
  return index;
}

std::map<std::string, SetPhrases> rank_set_phrases(const ContextBatch& context,
                                                   std::size_t top_n) {
  if (context.sets.empty()) throw DataError("context has no sets to rank");
  PhraseIndex index = build_phrase_index(context);
  const auto n_sets = static_cast<double>(index.set_count);
  std::map<std::string, SetPhrases> out;
  for (const auto& [set_id, tf] : index.term_frequency) {
    SetPhrases sp{set_id, top_n, {}};
    for (const auto& [phrase, count] : tf) {
      double score = static_cast<double>(count);
      if (index.set_count > 1) {
        score *= std::log(n_sets / static_cast<double>(index.set_frequency.at(phrase)));
      }
      if (score > 0.0) sp.entries.push_back({phrase, score});
    }
    sort_entries(sp.entries);
    if (sp.entries.size() > top_n) sp.entries.resize(top_n);
    out.emplace(set_id, std::move(sp));
  }
  return out;
}

SetPhrases accumulate_phrases(const SetPhrases& acc, const SetPhrases& fresh,
                              std::size_t top_n) {
  if (!acc.set_id.empty() && acc.set_id != fresh.set_id) {
    throw DataError("cannot accumulate phrases of set '" + fresh.set_id + "' into set '" +
                    acc.set_id + "'");
  }
  std::map<std::string, double> merged;
  for (const auto& e : acc.entries) merged[e.phrase] += e.score;
  for (const auto& e : fresh.entries) merged[e.phrase] += e.score;
  SetPhrases out{fresh.set_id, top_n, {}};
  out.entries.reserve(merged.size());
  for (auto& [phrase, score] : merged) out.entries.push_back({phrase, score});
  sort_entries(out.entries);
  if (out.entries.size() > top_n) out.entries.resize(top_n);
  return out;
}

double phrase_mass(const Sentence& sentence, const SetPhrases& phrases) {
  double mass = 0.0;
  for (const auto& e : phrases.entries) {
    std::size_t n = count_occurrences(sentence.tokens, e.phrase);
    if (n != 0) mass += static_cast<double>(n) * e.score;
  }
  return mass;
}

double phrase_mass(const Document& doc, const SetPhrases& phrases) {
  double mass = 0.0;
  for (const Sentence& s : doc.sentences) mass += phrase_mass(s, phrases);
  return mass;
}

double phrase_mass(std::span<const Document> docs, const SetPhrases& phrases) {
  double mass = 0.0;
  for (const Document& d : docs) mass += phrase_mass(d, phrases);
  return mass;
}

std::string phrases_debug_line(const SetPhrases& phrases, std::int64_t context_id) {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& e : phrases.entries) list.push_back({e.phrase, e.score});
  nlohmann::json obj = {
      {"set_id", phrases.set_id}, {"context_id", context_id}, {"phrases", std::move(list)}};
  return obj.dump();
}

}  // namespace pdsum
