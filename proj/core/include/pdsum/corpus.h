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

#ifndef PDSUM_CORPUS_H_
#define PDSUM_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pdsum {

// Seconds since the Unix epoch, UTC.
using Timestamp = std::int64_t;

inline constexpr Timestamp kSecondsPerDay = 86400;

// Parses an RFC 3339 instant ("2019-01-05T13:00:00Z", optional fraction and
// numeric offset). Fractional seconds are truncated.
Timestamp parse_rfc3339(std::string_view text);
std::string format_rfc3339(Timestamp t);

struct Sentence {
  std::string text;
  std::vector<std::string> tokens;
  std::uint32_t position = 0;
};

Sentence make_sentence(std::string text, std::uint32_t position);

struct Document {
  std::string doc_id;
  std::string set_id;
  Timestamp timestamp = 0;
  std::vector<Sentence> sentences;
};

// Half-open interval [start, end).
struct Window {
  Timestamp start = 0;
  Timestamp end = 0;

  bool contains(Timestamp t) const { return t >= start && t < end; }
};

struct ContextBatch {
  std::int64_t context_id = 0;
  Window window;
  std::map<std::string, std::vector<Document>> sets;
  std::map<std::string, std::string> ref_summaries;

  std::size_t document_count() const;
};

enum class ContextMode { kDaily, kRefGap };

struct StreamConfig {
  ContextMode context_mode = ContextMode::kDaily;
  std::size_t min_docs_per_set = 1;
  std::size_t min_lifespan_docs = 1;
  std::uint64_t seed = 0;

  void validate() const;
};

struct ReferenceSummary {
  std::string set_id;
  Timestamp timestamp = 0;
  std::string summary;
};

// Reads the corpus JSONL format. Output is sorted by (timestamp, doc_id).
// Throws DataError naming the 1-based line for malformed input.
std::vector<Document> load_corpus(const std::filesystem::path& path);
std::vector<Document> parse_corpus(std::string_view jsonl);

// Reads reference-summary JSONL, sorted by (set_id, timestamp).
std::vector<ReferenceSummary> load_references(const std::filesystem::path& path);
std::vector<ReferenceSummary> parse_references(std::string_view jsonl);

// One batch per UTC calendar day holding at least one retained document.
// Sets with fewer than cfg.min_lifespan_docs documents overall are dropped.
std::vector<ContextBatch> build_contexts_daily(const std::vector<Document>& docs,
                                               const StreamConfig& cfg);

// Each pair of consecutive references (t_prev, t] of a set becomes a context
// entry for that set holding its documents published in the gap; entries
// under cfg.min_docs_per_set are skipped. Entries whose windows overlap are
// merged into one batch as long as no set would appear twice in it.
// The batch carries the reference at t for each member set.
std::vector<ContextBatch> build_contexts_refgap(const std::vector<Document>& docs,
                                                const std::vector<ReferenceSummary>& refs,
                                                const StreamConfig& cfg);

// For daily batches: gives every set in each batch the first reference at or
// after the window start, or the latest one if none is that late.
void attach_daily_references(std::vector<ContextBatch>& batches,
                             const std::vector<ReferenceSummary>& refs);

}  // namespace pdsum

#endif  // PDSUM_CORPUS_H_
