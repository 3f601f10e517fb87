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

#include "pdsum/synth.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

#include <nlohmann/json.hpp>

#include "pdsum/error.h"
#include "pdsum/rng.h"
#include "pdsum/text.h"

namespace pdsum {
namespace {

constexpr std::array<std::string_view, 10> kSyllables = {"ka", "lo", "mi", "ne", "ru",
                                                         "sa", "ti", "vo", "ze", "pu"};

// Words common to every set, in the spirit of "die", "kill", "approach".
constexpr std::array<std::string_view, 40> kGenericWords = {
    "die",      "kill",      "approach", "evacuate", "rescue",    "damage",   "warn",
    "flood",    "wind",      "rain",     "official", "report",    "power",    "outage",
    "toll",     "injure",    "police",   "resident", "emergency", "authority", "coast",
    "shelter",  "victim",    "gust",     "missing",  "hospital",  "bridge",   "road",
    "crew",     "forecast",  "agency",   "minister", "village",   "province", "tremor",
    "aid",      "survivor",  "debris",   "relief",   "landslide"};

// family prefix + decimal digits spelled as syllables; injective per family.
std::string pseudo_word(std::string_view family, std::size_t index) {
  std::string digits;
  do {
    digits.insert(0, kSyllables[index % 10]);
    index /= 10;
  } while (index > 0);
  return std::string(family) + digits;
}

std::string capitalize(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

std::string make_sentence_text(std::vector<std::string> chunks, Rng& rng) {
  std::shuffle(chunks.begin(), chunks.end(), rng);
  std::string out;
  for (const auto& c : chunks) {
    if (!out.empty()) out.push_back(' ');
    out += c;
  }
  return capitalize(out) + ".";
}

std::vector<std::string> pick_words(const std::vector<std::string>& vocab, std::size_t n,
                                    Rng& rng) {
  std::vector<std::string> out;
  out.reserve(n);
  std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);
  for (std::size_t i = 0; i < n; ++i) out.push_back(vocab[pick(rng)]);
  return out;
}

std::vector<bool> planted_mask(std::size_t n, double rate, Rng& rng) {
  auto k = static_cast<std::size_t>(std::llround(rate * static_cast<double>(n)));
  k = std::min(k, n);
  std::vector<bool> mask(n, false);
  std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(k), true);
  std::shuffle(mask.begin(), mask.end(), rng);
  return mask;
}

}  // namespace

void ThemeConfig::validate() const {
  if (core_phrases < 2 && core_override.empty()) {
    throw UsageError("theme needs at least two lifelong phrases per set");
  }
  if (plant_rate < 0.0 || plant_rate > 1.0) throw UsageError("plant_rate must be in [0,1]");
  if (words_per_sentence < 6) throw UsageError("words_per_sentence must be >= 6");
  if (generic_vocab < words_per_sentence || generic_vocab > kGenericWords.size()) {
    throw UsageError("generic_vocab must be in [words_per_sentence, " +
                     std::to_string(kGenericWords.size()) + "]");
  }
  if (background_vocab < words_per_sentence) {
    throw UsageError("background_vocab must be >= words_per_sentence");
  }
}

const std::vector<std::string>& PlantedTruth::planted(const std::string& set_id,
                                                      std::int64_t context) const {
  auto it = phrases.find({set_id, context});
  if (it == phrases.end()) {
    throw DataError("no planted truth for (" + set_id + ", " + std::to_string(context) + ")");
  }
  return it->second;
}

bool PlantedTruth::is_planted(const std::string& set_id, const std::string& phrase) const {
  auto it = tokens.find(set_id);
  if (it == tokens.end()) return false;
  std::vector<std::string> parts = tokenize(phrase);
  if (parts.empty()) return false;
  return std::all_of(parts.begin(), parts.end(),
                     [&](const std::string& t) { return it->second.contains(t); });
}

SyntheticStream synth_stream(std::size_t n_sets, std::size_t docs_per_set_per_context,
                             std::size_t n_contexts, const ThemeConfig& theme,
                             std::uint64_t seed) {
  if (n_sets < 1 || docs_per_set_per_context < 1 || n_contexts < 1) {
    throw UsageError("synthetic stream counts must be >= 1");
  }
  theme.validate();
  if (!theme.core_override.empty() && theme.core_override.size() != n_sets) {
    throw UsageError("core_override must list phrases for every set");
  }

  std::vector<std::string> generic(kGenericWords.begin(),
                                   kGenericWords.begin() + static_cast<std::ptrdiff_t>(theme.generic_vocab));
  std::vector<std::string> background;
  for (std::size_t i = 0; i < theme.background_vocab; ++i) background.push_back(pseudo_word("mu", i));

  auto set_id_of = [](std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "set%03zu", i);
    return std::string(buf);
  };

  // Lifelong phrases.
  std::vector<std::vector<std::string>> core(n_sets);
  for (std::size_t i = 0; i < n_sets; ++i) {
    if (!theme.core_override.empty()) {
      core[i] = theme.core_override[i];
      if (core[i].size() < 2) throw UsageError("each set needs at least two lifelong phrases");
    } else {
      for (std::size_t j = 0; j < theme.core_phrases; ++j) {
        std::size_t base = (i * theme.core_phrases + j) * 2;
        core[i].push_back(join_bigram(pseudo_word("ta", base), pseudo_word("ta", base + 1)));
      }
    }
  }
  auto fresh_of = [&](std::size_t set, std::size_t ctx) {
    std::vector<std::string> out;
    for (std::size_t j = 0; j < theme.fresh_phrases; ++j) {
      std::size_t base = ((set * n_contexts + ctx) * theme.fresh_phrases + j) * 2;
      out.push_back(join_bigram(pseudo_word("fe", base), pseudo_word("fe", base + 1)));
    }
    return out;
  };

  SyntheticStream out;
  // Collision check across sets and against the shared vocabularies.
  std::map<std::string, std::size_t> owner;
  for (const auto& w : generic) owner.emplace(w, n_sets);
  for (const auto& w : background) owner.emplace(w, n_sets);
  auto claim = [&](const std::string& phrase, std::size_t set) {
    std::vector<std::string> toks = tokenize(phrase);
    if (toks.empty()) throw DataError("planted phrase '" + phrase + "' has no tokens");
    for (const auto& t : toks) {
      if (is_stopword(t)) {
        throw DataError("planted phrase '" + phrase + "' contains stopword '" + t + "'");
      }
      auto [it, inserted] = owner.emplace(t, set);
      if (!inserted && it->second != set) {
        throw DataError("vocabulary collision: token '" + t + "' of set " + set_id_of(set) +
                        (it->second == n_sets ? " is shared vocabulary"
                                              : " also planted in " + set_id_of(it->second)));
      }
      out.truth.tokens[set_id_of(set)].insert(t);
    }
  };
  for (std::size_t i = 0; i < n_sets; ++i) {
    for (const auto& p : core[i]) claim(p, i);
    for (std::size_t t = 0; t < n_contexts; ++t) {
      for (const auto& p : fresh_of(i, t)) claim(p, i);
    }
  }

  const std::size_t words = theme.words_per_sentence;
  for (std::size_t t = 0; t < n_contexts; ++t) {
    const Timestamp day = theme.start + static_cast<Timestamp>(t) * kSecondsPerDay;
    for (std::size_t i = 0; i < n_sets; ++i) {
      const std::string set_id = set_id_of(i);
      std::vector<std::string> fresh = fresh_of(i, t);
      Rng rng = make_rng(seed, "synth/" + set_id, t);

      std::vector<std::string> truth = core[i];
      truth.insert(truth.end(), fresh.begin(), fresh.end());
      out.truth.phrases[{set_id, static_cast<std::int64_t>(t)}] = truth;

      std::vector<bool> with_core = planted_mask(docs_per_set_per_context, theme.plant_rate, rng);
      std::vector<bool> with_fresh = planted_mask(docs_per_set_per_context, theme.plant_rate, rng);

      for (std::size_t j = 0; j < docs_per_set_per_context; ++j) {
        std::vector<std::string> texts;
        if (with_core[j]) {
          // The headline phrase rides along with one other lifelong phrase.
          std::uniform_int_distribution<std::size_t> other(1, core[i].size() - 1);
          std::vector<std::string> chunks = {core[i][0], core[i][other(rng)]};
          for (auto& w : pick_words(background, words - 4, rng)) chunks.push_back(std::move(w));
          texts.push_back(make_sentence_text(std::move(chunks), rng));
        }
        if (with_fresh[j]) {
          std::vector<std::string> chunks = fresh;
          std::size_t used = 2 * fresh.size();
          for (auto& w : pick_words(background, words > used + 2 ? words - used : 2, rng)) {
            chunks.push_back(std::move(w));
          }
          texts.push_back(make_sentence_text(std::move(chunks), rng));
        }
        for (std::size_t g = 0; g < theme.generic_sentences; ++g) {
          std::vector<std::string> pool = generic;
          std::shuffle(pool.begin(), pool.end(), rng);
          pool.resize(words);
          texts.push_back(make_sentence_text(std::move(pool), rng));
        }
        for (std::size_t f = 0; f < theme.filler_sentences; ++f) {
          texts.push_back(make_sentence_text(pick_words(background, words, rng), rng));
        }
        std::shuffle(texts.begin(), texts.end(), rng);

        Document doc;
        char id[64];
        std::snprintf(id, sizeof(id), "%s-c%03zu-d%04zu", set_id.c_str(), t, j);
        doc.doc_id = id;
        doc.set_id = set_id;
        doc.timestamp = day + 3600 + static_cast<Timestamp>(j * 60 + i);
        for (std::size_t k = 0; k < texts.size(); ++k) {
          doc.sentences.push_back(make_sentence(std::move(texts[k]), static_cast<std::uint32_t>(k)));
        }
        out.docs.push_back(std::move(doc));
      }

      // Human-style reference at the end of the day.
      std::vector<std::string> ref_chunks = {core[i][0]};
      ref_chunks.insert(ref_chunks.end(), fresh.begin(), fresh.end());
      for (auto& w : pick_words(generic, 2, rng)) ref_chunks.push_back(std::move(w));
      out.refs.push_back({set_id, day + kSecondsPerDay - 1, make_sentence_text(ref_chunks, rng)});
      if (t == 0) {
        // Opening reference so the first day is a reference gap as well.
        out.refs.push_back({set_id, day - 1, make_sentence_text({core[i][0], core[i][1]}, rng)});
      }
    }
  }
  std::sort(out.docs.begin(), out.docs.end(), [](const Document& a, const Document& b) {
    if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
    return a.doc_id < b.doc_id;
  });
  std::sort(out.refs.begin(), out.refs.end(),
            [](const ReferenceSummary& a, const ReferenceSummary& b) {
              if (a.set_id != b.set_id) return a.set_id < b.set_id;
              return a.timestamp < b.timestamp;
            });
  return out;
}

std::string corpus_to_jsonl(const std::vector<Document>& docs) {
  std::string out;
  for (const Document& d : docs) {
    nlohmann::json sentences = nlohmann::json::array();
    for (const Sentence& s : d.sentences) sentences.push_back(s.text);
    nlohmann::json obj = {{"doc_id", d.doc_id},
                          {"set_id", d.set_id},
                          {"timestamp", format_rfc3339(d.timestamp)},
                          {"sentences", std::move(sentences)}};
    out += obj.dump();
    out.push_back('\n');
  }
  return out;
}

std::string references_to_jsonl(const std::vector<ReferenceSummary>& refs) {
  std::string out;
  for (const ReferenceSummary& r : refs) {
    nlohmann::json obj = {{"set_id", r.set_id},
                          {"timestamp", format_rfc3339(r.timestamp)},
                          {"summary", r.summary}};
    out += obj.dump();
    out.push_back('\n');
  }
  return out;
}

}  // namespace pdsum
