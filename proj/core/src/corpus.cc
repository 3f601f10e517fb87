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

#include "pdsum/corpus.h"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "pdsum/error.h"
#include "pdsum/text.h"

namespace pdsum {
namespace {

using nlohmann::json;

int parse_digits(std::string_view s, std::size_t pos, std::size_t count,
                 std::string_view whole) {
  int value = 0;
  if (pos + count > s.size()) {
    throw DataError("bad RFC 3339 timestamp '" + std::string(whole) + "'");
  }
  auto [ptr, ec] = std::from_chars(s.data() + pos, s.data() + pos + count, value);
  if (ec != std::errc() || ptr != s.data() + pos + count) {
    throw DataError("bad RFC 3339 timestamp '" + std::string(whole) + "'");
  }
  return value;
}

void expect_char(std::string_view s, std::size_t pos, std::string_view allowed,
                 std::string_view whole) {
  if (pos >= s.size() || allowed.find(s[pos]) == std::string_view::npos) {
    throw DataError("bad RFC 3339 timestamp '" + std::string(whole) + "'");
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") != std::string_view::npos) fn(line, line_no);
    if (nl == text.size()) break;
    pos = nl + 1;
  }
}

const json& required(const json& obj, const char* key, std::size_t line_no) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) {
    throw DataError("line " + std::to_string(line_no) + ": missing required field '" +
                    key + "'");
  }
  return *it;
}

std::string required_string(const json& obj, const char* key, std::size_t line_no) {
  const json& v = required(obj, key, line_no);
  if (!v.is_string()) {
    throw DataError("line " + std::to_string(line_no) + ": field '" + key +
                    "' must be a string");
  }
  return v.get<std::string>();
}

json parse_line(std::string_view line, std::size_t line_no) {
  json obj;
  try {
    obj = json::parse(line);
  } catch (const json::parse_error& e) {
    throw DataError("line " + std::to_string(line_no) + ": parse error: " + e.what());
  }
  if (!obj.is_object()) {
    throw DataError("line " + std::to_string(line_no) + ": expected a JSON object");
  }
  return obj;
}

Timestamp line_timestamp(const json& obj, std::size_t line_no) {
  std::string ts = required_string(obj, "timestamp", line_no);
  try {
    return parse_rfc3339(ts);
  } catch (const DataError& e) {
    throw DataError("line " + std::to_string(line_no) + ": " + e.what());
  }
}

Timestamp day_start(Timestamp t) {
  Timestamp day = t / kSecondsPerDay;
  if (t % kSecondsPerDay < 0) --day;
  return day * kSecondsPerDay;
}

}  // namespace

Timestamp parse_rfc3339(std::string_view s) {
  // YYYY-MM-DDTHH:MM:SS[.frac](Z|+HH:MM|-HH:MM)
  int year = parse_digits(s, 0, 4, s);
  expect_char(s, 4, "-", s);
  int month = parse_digits(s, 5, 2, s);
  expect_char(s, 7, "-", s);
  int day = parse_digits(s, 8, 2, s);
  expect_char(s, 10, "Tt ", s);
  int hour = parse_digits(s, 11, 2, s);
  expect_char(s, 13, ":", s);
  int minute = parse_digits(s, 14, 2, s);
  expect_char(s, 16, ":", s);
  int second = parse_digits(s, 17, 2, s);
  std::size_t pos = 19;
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    std::size_t digits = 0;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos, ++digits;
    if (digits == 0) throw DataError("bad RFC 3339 timestamp '" + std::string(s) + "'");
  }
  int offset = 0;
  expect_char(s, pos, "Zz+-", s);
  if (s[pos] == 'Z' || s[pos] == 'z') {
    ++pos;
  } else {
    int sign = s[pos] == '-' ? -1 : 1;
    int oh = parse_digits(s, pos + 1, 2, s);
    expect_char(s, pos + 3, ":", s);
    int om = parse_digits(s, pos + 4, 2, s);
    offset = sign * (oh * 3600 + om * 60);
    pos += 6;
  }
  if (pos != s.size() || month < 1 || month > 12 || hour > 23 || minute > 59 ||
      second > 60) {
    throw DataError("bad RFC 3339 timestamp '" + std::string(s) + "'");
  }
  using namespace std::chrono;
  year_month_day ymd{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(month)},
                     std::chrono::day{static_cast<unsigned>(day)}};
  if (!ymd.ok()) throw DataError("bad RFC 3339 date '" + std::string(s) + "'");
  Timestamp days = sys_days{ymd}.time_since_epoch().count();
  return days * kSecondsPerDay + hour * 3600 + minute * 60 + second - offset;
}

std::string format_rfc3339(Timestamp t) {
  using namespace std::chrono;
  Timestamp start = day_start(t);
  Timestamp secs = t - start;
  year_month_day ymd{sys_days{days{start / kSecondsPerDay}}};
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02lld:%02lld:%02lldZ",
                static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()), static_cast<long long>(secs / 3600),
                static_cast<long long>((secs / 60) % 60), static_cast<long long>(secs % 60));
  return buf;
}

Sentence make_sentence(std::string text, std::uint32_t position) {
  Sentence s;
  s.tokens = tokenize(text);
  s.text = std::move(text);
  s.position = position;
  return s;
}

std::size_t ContextBatch::document_count() const {
  std::size_t n = 0;
  for (const auto& [id, docs] : sets) n += docs.size();
  return n;
}

void StreamConfig::validate() const {
  if (min_docs_per_set < 1 || min_lifespan_docs < 1) {
    throw UsageError("stream config counts must be >= 1");
  }
}

std::vector<Document> parse_corpus(std::string_view jsonl) {
  std::vector<Document> docs;
  std::unordered_set<std::string> seen;
  for_each_line(jsonl, [&](std::string_view line, std::size_t line_no) {
    json obj = parse_line(line, line_no);
    Document doc;
    doc.doc_id = required_string(obj, "doc_id", line_no);
    doc.set_id = required_string(obj, "set_id", line_no);
    doc.timestamp = line_timestamp(obj, line_no);

    std::vector<std::string> pieces;
    if (auto it = obj.find("sentences"); it != obj.end() && !it->is_null()) {
      if (!it->is_array()) {
        throw DataError("line " + std::to_string(line_no) + ": 'sentences' must be an array");
      }
      for (const json& s : *it) {
        if (!s.is_string()) {
          throw DataError("line " + std::to_string(line_no) +
                          ": 'sentences' entries must be strings");
        }
        pieces.push_back(s.get<std::string>());
      }
    } else if (auto t = obj.find("text"); t != obj.end() && t->is_string()) {
      pieces = split_sentences(t->get<std::string>());
    } else {
      throw DataError("line " + std::to_string(line_no) +
                      ": missing required field 'text' or 'sentences'");
    }
    if (pieces.empty()) {
      throw DataError("line " + std::to_string(line_no) + ": document '" + doc.doc_id +
                      "' has no sentences");
    }
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      doc.sentences.push_back(make_sentence(std::move(pieces[i]), static_cast<std::uint32_t>(i)));
    }
    if (!seen.insert(doc.doc_id).second) {
      throw DataError("line " + std::to_string(line_no) + ": duplicate doc_id '" +
                      doc.doc_id + "'");
    }
    docs.push_back(std::move(doc));
  });
  std::sort(docs.begin(), docs.end(), [](const Document& a, const Document& b) {
    if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
    return a.doc_id < b.doc_id;
  });
  return docs;
}

std::vector<Document> load_corpus(const std::filesystem::path& path) {
  std::string text = read_file(path);
  try {
    return parse_corpus(text);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::vector<ReferenceSummary> parse_references(std::string_view jsonl) {
  std::vector<ReferenceSummary> refs;
  for_each_line(jsonl, [&](std::string_view line, std::size_t line_no) {
    json obj = parse_line(line, line_no);
    ReferenceSummary r;
    r.set_id = required_string(obj, "set_id", line_no);
    r.timestamp = line_timestamp(obj, line_no);
    r.summary = required_string(obj, "summary", line_no);
    refs.push_back(std::move(r));
  });
  std::stable_sort(refs.begin(), refs.end(),
                   [](const ReferenceSummary& a, const ReferenceSummary& b) {
                     if (a.set_id != b.set_id) return a.set_id < b.set_id;
                     return a.timestamp < b.timestamp;
                   });
  return refs;
}

std::vector<ReferenceSummary> load_references(const std::filesystem::path& path) {
  std::string text = read_file(path);
  try {
    return parse_references(text);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::vector<ContextBatch> build_contexts_daily(const std::vector<Document>& docs,
                                               const StreamConfig& cfg) {
  cfg.validate();
  std::unordered_map<std::string, std::size_t> lifetime;
  for (const Document& d : docs) ++lifetime[d.set_id];

  std::vector<ContextBatch> out;
  for (const Document& d : docs) {
    if (lifetime[d.set_id] < cfg.min_lifespan_docs) continue;
    Timestamp start = day_start(d.timestamp);
    if (out.empty() || out.back().window.start != start) {
      if (!out.empty() && start < out.back().window.start) {
        throw DataError("documents are not sorted by timestamp (doc '" + d.doc_id + "')");
      }
      ContextBatch batch;
      batch.context_id = static_cast<std::int64_t>(out.size());
      batch.window = {start, start + kSecondsPerDay};
      out.push_back(std::move(batch));
    }
    out.back().sets[d.set_id].push_back(d);
  }
  return out;
}

std::vector<ContextBatch> build_contexts_refgap(const std::vector<Document>& docs,
                                                const std::vector<ReferenceSummary>& refs,
                                                const StreamConfig& cfg) {
  cfg.validate();
  struct Entry {
    std::string set_id;
    Window window;
    std::vector<Document> docs;
    std::string reference;
  };

  std::map<std::string, std::vector<const ReferenceSummary*>> by_set;
  for (const ReferenceSummary& r : refs) by_set[r.set_id].push_back(&r);
  std::map<std::string, std::vector<const Document*>> docs_by_set;
  for (const Document& d : docs) docs_by_set[d.set_id].push_back(&d);

  std::vector<Entry> entries;
  for (auto& [set_id, set_refs] : by_set) {
    if (set_refs.size() < 2) continue;
    std::stable_sort(set_refs.begin(), set_refs.end(),
                     [](const ReferenceSummary* a, const ReferenceSummary* b) {
                       return a->timestamp < b->timestamp;
                     });
    const auto& set_docs = docs_by_set[set_id];
    for (std::size_t k = 1; k < set_refs.size(); ++k) {
      // (t_prev, t] expressed as the half-open [t_prev + 1, t + 1) at second precision.
      Window w{set_refs[k - 1]->timestamp + 1, set_refs[k]->timestamp + 1};
      if (w.end <= w.start) continue;
      Entry e{set_id, w, {}, set_refs[k]->summary};
      for (const Document* d : set_docs) {
        if (w.contains(d->timestamp)) e.docs.push_back(*d);
      }
      if (e.docs.size() < cfg.min_docs_per_set) continue;
      entries.push_back(std::move(e));
    }
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.window.end != b.window.end) return a.window.end < b.window.end;
    if (a.window.start != b.window.start) return a.window.start < b.window.start;
    return a.set_id < b.set_id;
  });

  std::vector<ContextBatch> out;
  for (Entry& e : entries) {
    bool join = false;
    if (!out.empty()) {
      const ContextBatch& cur = out.back();
      bool overlaps = e.window.start < cur.window.end && cur.window.start < e.window.end;
      join = overlaps && !cur.sets.contains(e.set_id);
    }
    if (!join) {
      ContextBatch batch;
      batch.context_id = static_cast<std::int64_t>(out.size());
      batch.window = e.window;
      out.push_back(std::move(batch));
    }
    ContextBatch& cur = out.back();
    cur.window.start = std::min(cur.window.start, e.window.start);
    cur.window.end = std::max(cur.window.end, e.window.end);
    cur.ref_summaries[e.set_id] = std::move(e.reference);
    cur.sets[e.set_id] = std::move(e.docs);
  }
  return out;
}

void attach_daily_references(std::vector<ContextBatch>& batches,
                             const std::vector<ReferenceSummary>& refs) {
  std::map<std::string, std::vector<const ReferenceSummary*>> by_set;
  for (const ReferenceSummary& r : refs) by_set[r.set_id].push_back(&r);
  for (auto& [id, list] : by_set) {
    std::stable_sort(list.begin(), list.end(),
                     [](const ReferenceSummary* a, const ReferenceSummary* b) {
                       return a->timestamp < b->timestamp;
                     });
  }
  for (ContextBatch& batch : batches) {
    for (const auto& [set_id, docs] : batch.sets) {
      auto it = by_set.find(set_id);
      if (it == by_set.end()) continue;
      const ReferenceSummary* chosen = it->second.back();
      for (const ReferenceSummary* r : it->second) {
        if (r->timestamp >= batch.window.start) {
          chosen = r;
          break;
        }
      }
      batch.ref_summaries[set_id] = chosen->summary;
    }
  }
}

}  // namespace pdsum
