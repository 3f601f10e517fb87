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

#include "pdsum/state.h"

#include <array>

#include "pdsum/binary_io.h"
#include "pdsum/error.h"

namespace pdsum {

namespace {

constexpr std::array<char, 4> kMagic = {'P', 'D', 'S', 'T'};
constexpr std::uint8_t kTagParams = 'P';
constexpr std::uint8_t kTagSets = 'S';
constexpr std::uint8_t kTagCentroids = 'C';

std::string encode_sets(const std::map<std::string, SetState>& sets) {
  binary::Writer w;
  w.put<std::uint32_t>(static_cast<std::uint32_t>(sets.size()));
  for (const auto& [id, s] : sets) {
    w.put_string16(id);
    w.put_string16(s.accumulated.set_id);
    w.put<std::uint64_t>(s.accumulated.capacity);
    w.put<std::uint32_t>(static_cast<std::uint32_t>(s.accumulated.entries.size()));
    for (const PhraseEntry& e : s.accumulated.entries) {
      w.put_string32(e.phrase);
      w.put<double>(e.score);
    }
    w.put<std::uint32_t>(static_cast<std::uint32_t>(s.previous_summary.size()));
    for (const std::string& t : s.previous_summary) w.put_string32(t);
    w.put<std::uint64_t>(s.contexts_seen);
    w.put<std::int64_t>(s.last_context_id);
  }
  return w.take();
}

std::map<std::string, SetState> decode_sets(std::string_view bytes) {
  binary::Reader r(bytes, "set-state section");
  std::map<std::string, SetState> out;
  const auto n = r.get<std::uint32_t>();
  for (std::uint32_t i = 0; i < n; ++i) {
    SetState s;
    s.set_id = r.get_string16();
    s.accumulated.set_id = r.get_string16();
    s.accumulated.capacity = r.get<std::uint64_t>();
    const auto ne = r.get<std::uint32_t>();
    for (std::uint32_t k = 0; k < ne; ++k) {
      PhraseEntry e;
      e.phrase = r.get_string32();
      e.score = r.get<double>();
      s.accumulated.entries.push_back(std::move(e));
    }
    const auto nt = r.get<std::uint32_t>();
    for (std::uint32_t k = 0; k < nt; ++k) s.previous_summary.push_back(r.get_string32());
    s.contexts_seen = r.get<std::uint64_t>();
    s.last_context_id = r.get<std::int64_t>();
    std::string key = s.set_id;
    if (!out.emplace(std::move(key), std::move(s)).second) {
      throw DataError("duplicate set in state file");
    }
  }
  if (!r.done()) throw DataError("trailing bytes in set-state section");
  return out;
}

std::string encode_centroids(const std::map<std::string, CentroidState>& cents) {
  binary::Writer w;
  w.put<std::uint32_t>(static_cast<std::uint32_t>(cents.size()));
  for (const auto& [id, c] : cents) {
    w.put_string16(id);
    w.put<std::uint64_t>(c.count);
    w.put<std::uint32_t>(static_cast<std::uint32_t>(c.center.size()));
    for (Eigen::Index k = 0; k < c.center.size(); ++k) w.put<double>(c.center[k]);
  }
  return w.take();
}

std::map<std::string, CentroidState> decode_centroids(std::string_view bytes) {
  binary::Reader r(bytes, "centroid section");
  std::map<std::string, CentroidState> out;
  const auto n = r.get<std::uint32_t>();
  for (std::uint32_t i = 0; i < n; ++i) {
    CentroidState c;
    c.set_id = r.get_string16();
    c.count = r.get<std::uint64_t>();
    const auto dim = r.get<std::uint32_t>();
    if (r.remaining() / sizeof(double) < dim) throw DataError("truncated centroid section");
    c.center.resize(dim);
    for (std::uint32_t k = 0; k < dim; ++k) c.center[k] = r.get<double>();
    std::string key = c.set_id;
    out.emplace(std::move(key), std::move(c));
  }
  if (!r.done()) throw DataError("trailing bytes in centroid section");
  return out;
}

}  // namespace

SetState update(const SetState& state, const SetPhrases& new_phrases, const Summary& summary,
                std::int64_t context_id, std::size_t top_n) {
  if (context_id <= state.last_context_id) {
    throw DataError("out-of-order context " + std::to_string(context_id) + " for set '" +
                    state.set_id + "' (last " + std::to_string(state.last_context_id) + ")");
  }
  SetState next;
  next.set_id = state.set_id.empty() ? new_phrases.set_id : state.set_id;
  next.accumulated = accumulate_phrases(state.accumulated, new_phrases, top_n);
  next.accumulated.set_id = next.set_id;
  next.previous_summary = summary.tokens();
  next.contexts_seen = state.contexts_seen + 1;
  next.last_context_id = context_id;
  return next;
}

const SetState* StreamState::find(const std::string& set_id) const {
  auto it = sets.find(set_id);
  return it == sets.end() ? nullptr : &it->second;
}

std::size_t StreamState::evict_idle(std::int64_t current_context, std::size_t max_idle) {
  if (max_idle == 0) return 0;
  std::size_t dropped = 0;
  for (auto it = sets.begin(); it != sets.end();) {
    if (current_context - it->second.last_context_id > static_cast<std::int64_t>(max_idle)) {
      centroids.erase(it->first);
      it = sets.erase(it);
      ++dropped;
    } else {
      ++it;
    }
  }
  return dropped;
}

bool StreamState::operator==(const StreamState& other) const {
  return sets == other.sets && params == other.params && centroids == other.centroids;
}

std::string serialize_state(const StreamState& state) {
  std::vector<std::pair<std::uint8_t, std::string>> sections;
  if (state.params) sections.emplace_back(kTagParams, serialize_checkpoint(*state.params));
  sections.emplace_back(kTagSets, encode_sets(state.sets));
  if (!state.centroids.empty()) sections.emplace_back(kTagCentroids, encode_centroids(state.centroids));

  binary::Writer w;
  w.put_bytes(std::string_view(kMagic.data(), kMagic.size()));
  w.put<std::uint16_t>(kStateMajorVersion);
  w.put<std::uint16_t>(kStateMinorVersion);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(sections.size()));
  for (const auto& [tag, payload] : sections) {
    w.put<std::uint8_t>(tag);
    w.put<std::uint64_t>(payload.size());
    w.put_bytes(payload);
  }
  return w.take();
}

StreamState parse_state(std::string_view bytes) {
  binary::Reader r(bytes, "state file");
  if (r.get_bytes(4) != std::string_view(kMagic.data(), kMagic.size())) {
    throw DataError("not a state file (bad magic)");
  }
  const auto major = r.get<std::uint16_t>();
  const auto minor = r.get<std::uint16_t>();
  if (major != kStateMajorVersion) {
    throw DataError("state file version " + std::to_string(major) + "." + std::to_string(minor) +
                    " is not supported (expected " + std::to_string(kStateMajorVersion) + ".x)");
  }
  StreamState state;
  const auto n = r.get<std::uint32_t>();
  for (std::uint32_t i = 0; i < n; ++i) {
    const auto tag = r.get<std::uint8_t>();
    const auto len = r.get<std::uint64_t>();
    if (len > r.remaining()) throw DataError("truncated state file section");
    std::string_view payload = r.get_bytes(static_cast<std::size_t>(len));
    switch (tag) {
      case kTagParams: state.params = parse_checkpoint(payload); break;
      case kTagSets: state.sets = decode_sets(payload); break;
      case kTagCentroids: state.centroids = decode_centroids(payload); break;
      default: break;  // newer minor versions may add sections
    }
  }
  if (!r.done()) throw DataError("trailing bytes in state file");
  return state;
}

void save_state(const StreamState& state, const std::filesystem::path& path) {
  binary::write_binary_file(path.string(), serialize_state(state));
}

StreamState load_state(const std::filesystem::path& path) {
  return parse_state(binary::read_binary_file(path.string()));
}

}  // namespace pdsum
