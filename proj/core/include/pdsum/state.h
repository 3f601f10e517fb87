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

#ifndef PDSUM_STATE_H_
#define PDSUM_STATE_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pdsum/baselines.h"
#include "pdsum/encoder.h"
#include "pdsum/phrase.h"
#include "pdsum/summary.h"

namespace pdsum {

// Everything a set carries from one context to the next. Holds no document
// text or embeddings.
struct SetState {
  std::string set_id;
  SetPhrases accumulated;
  std::vector<std::string> previous_summary;
  std::uint64_t contexts_seen = 0;
  std::int64_t last_context_id = -1;

  bool operator==(const SetState&) const = default;
};

// Merges the context's phrases, replaces the previous summary tokens and
// advances the counters. context_id must exceed state.last_context_id.
SetState update(const SetState& state, const SetPhrases& new_phrases, const Summary& summary,
                std::int64_t context_id, std::size_t top_n);

// Cross-context carryover of a whole stream: per-set state, one global encoder
// and, for incremental baselines, per-set running centers.
struct StreamState {
  std::map<std::string, SetState> sets;
  std::optional<EncoderParams> params;
  std::map<std::string, CentroidState> centroids;

  const SetState* find(const std::string& set_id) const;
  // Drops sets not updated within the last `max_idle` contexts. 0 disables.
  std::size_t evict_idle(std::int64_t current_context, std::size_t max_idle);

  bool operator==(const StreamState& other) const;
};

inline constexpr std::uint16_t kStateMajorVersion = 1;
inline constexpr std::uint16_t kStateMinorVersion = 1;

// "PDST" magic, u16 major, u16 minor, u32 section count, then sections of
// [u8 tag, u64 length, payload]: 'P' encoder checkpoint, 'S' set states
// (phrases as length-prefixed UTF-8 + f64 scores), 'C' centroid states.
// Unknown tags are skipped; a different major version is rejected.
std::string serialize_state(const StreamState& state);
StreamState parse_state(std::string_view bytes);
void save_state(const StreamState& state, const std::filesystem::path& path);
StreamState load_state(const std::filesystem::path& path);

}  // namespace pdsum

#endif  // PDSUM_STATE_H_
