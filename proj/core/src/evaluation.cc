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

#include "pdsum/evaluation.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "pdsum/error.h"

namespace pdsum {

namespace {

RougeScore from_overlap(double overlap, std::size_t cand, std::size_t ref) {
  RougeScore s;
  if (cand == 0 || ref == 0 || overlap == 0.0) return s;
  s.precision = overlap / static_cast<double>(cand);
  s.recall = overlap / static_cast<double>(ref);
  s.f1 = 2.0 * s.precision * s.recall / (s.precision + s.recall);
  return s;
}

std::map<std::string, std::size_t> ngram_counts(const Tokens& t, int n) {
  std::map<std::string, std::size_t> out;
  if (t.size() < static_cast<std::size_t>(n)) return out;
  for (std::size_t i = 0; i + n <= t.size(); ++i) {
    std::string key = t[i];
    for (int k = 1; k < n; ++k) key += '\x1f' + t[i + k];
    ++out[key];
  }
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

RougeScore rouge_n(const Tokens& candidate, const Tokens& reference, int n) {
  if (n != 1 && n != 2) throw UsageError("rouge_n supports n = 1 or 2");
  auto c = ngram_counts(candidate, n);
  auto r = ngram_counts(reference, n);
  std::size_t cand_total = 0, ref_total = 0, overlap = 0;
  for (const auto& [g, k] : c) {
    cand_total += k;
    auto it = r.find(g);
    if (it != r.end()) overlap += std::min(k, it->second);
  }
  for (const auto& [g, k] : r) ref_total += k;
  return from_overlap(static_cast<double>(overlap), cand_total, ref_total);
}

RougeScore rouge_l(const Tokens& candidate, const Tokens& reference) {
  if (candidate.empty() || reference.empty()) return {};
  std::vector<std::size_t> prev(reference.size() + 1, 0), cur(reference.size() + 1, 0);
  for (const std::string& a : candidate) {
    for (std::size_t j = 1; j <= reference.size(); ++j) {
      cur[j] = a == reference[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return from_overlap(static_cast<double>(prev.back()), candidate.size(), reference.size());
}

Tokens token_diff(const Tokens& summary, const Tokens& previous) {
  std::map<std::string, std::size_t> budget;
  for (const std::string& t : previous) ++budget[t];
  Tokens out;
  for (const std::string& t : summary) {
    auto it = budget.find(t);
    if (it != budget.end() && it->second > 0) {
      --it->second;
    } else {
      out.push_back(t);
    }
  }
  return out;
}

std::string_view RougeMetric::name() const {
  switch (kind_) {
    case Kind::kR1: return "R1";
    case Kind::kR2: return "R2";
    case Kind::kRL: return "RL";
  }
  return "?";
}

double RougeMetric::score(const Tokens& summary, const Tokens& reference) const {
  switch (kind_) {
    case Kind::kR1: return rouge_n(summary, reference, 1).f1;
    case Kind::kR2: return rouge_n(summary, reference, 2).f1;
    case Kind::kRL: return rouge_l(summary, reference).f1;
  }
  return 0.0;
}

std::vector<std::unique_ptr<Metric>> default_metrics() {
  std::vector<std::unique_ptr<Metric>> out;
  out.push_back(std::make_unique<RougeMetric>(RougeMetric::Kind::kR1));
  out.push_back(std::make_unique<RougeMetric>(RougeMetric::Kind::kR2));
  out.push_back(std::make_unique<RougeMetric>(RougeMetric::Kind::kRL));
  return out;
}

double score_relevance(const Tokens& summary, const Tokens& reference, const Metric& metric) {
  return metric.score(summary, reference);
}

double score_novelty(const Tokens& summary, const Tokens& previous, const Tokens& reference,
                     const Metric& metric) {
  return metric.score(token_diff(summary, previous), reference);
}

Distinctiveness score_distinctiveness(const Tokens& summary, const Tokens& own_reference,
                                      const std::vector<Tokens>& other_references,
                                      const Metric& metric) {
  Distinctiveness d;
  if (other_references.empty()) return d;
  double num = 0.0;
  for (const Tokens& g : other_references) num += 1.0 - metric.score(summary, g);
  num /= static_cast<double>(other_references.size());
  double den = 1.0 - metric.score(summary, own_reference);
  if (den < kDistinctivenessClamp) {
    den = kDistinctivenessClamp;
    d.clamped = true;
  }
  d.value = num / den;
  return d;
}

std::string_view criterion_name(Criterion c) {
  switch (c) {
    case Criterion::kRelevance: return "relevance";
    case Criterion::kNovelty: return "novelty";
    case Criterion::kDistinctiveness: return "distinctiveness";
  }
  return "?";
}

std::vector<EvalRow> evaluate_context(const std::vector<EvalInput>& inputs,
                                      const std::vector<std::unique_ptr<Metric>>& metrics) {
  std::vector<EvalRow> rows;
  rows.reserve(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const EvalInput& in = inputs[i];
    std::vector<Tokens> others;
    for (std::size_t j = 0; j < inputs.size(); ++j) {
      if (j != i) others.push_back(inputs[j].reference);
    }
    EvalRow row{in.set_id, in.context_id, {}, 0.0};
    for (const auto& m : metrics) {
      MetricScores s;
      s.relevance = score_relevance(in.summary, in.reference, *m);
      s.novelty = score_novelty(in.summary, in.previous, in.reference, *m);
      Distinctiveness d = score_distinctiveness(in.summary, in.reference, others, *m);
      s.distinctiveness = d.value;
      s.clamped = d.clamped;
      row.scores.emplace(std::string(m->name()), s);
    }
    if (!in.summary.empty()) {
      row.novel_token_ratio = static_cast<double>(token_diff(in.summary, in.previous).size()) /
                              static_cast<double>(in.summary.size());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

const Aggregate* EvalReport::find(std::string_view metric, std::string_view criterion) const {
  for (const Aggregate& a : aggregates) {
    if (a.metric == metric && a.criterion == criterion) return &a;
  }
  return nullptr;
}

Aggregate summarize_values(std::string metric, std::string criterion,
                           const std::vector<double>& values) {
  Aggregate a{std::move(metric), std::move(criterion), 0.0, 0.0, values.size()};
  if (values.empty()) return a;
  double sum = 0.0;
  for (double v : values) sum += v;
  a.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - a.mean) * (v - a.mean);
    const double sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
    a.stderr_ = sd / std::sqrt(static_cast<double>(values.size()));
  }
  return a;
}

EvalReport aggregate(std::vector<EvalRow> rows) {
  EvalReport report;
  std::vector<std::string> names;
  for (const EvalRow& r : rows) {
    for (const auto& [name, s] : r.scores) {
      if (std::find(names.begin(), names.end(), name) == names.end()) names.push_back(name);
    }
  }
  std::sort(names.begin(), names.end());
  for (const std::string& name : names) {
    std::vector<double> rel, nov, dis;
    for (const EvalRow& r : rows) {
      auto it = r.scores.find(name);
      if (it == r.scores.end()) continue;
      rel.push_back(it->second.relevance);
      nov.push_back(it->second.novelty);
      if (it->second.distinctiveness && !it->second.clamped) {
        dis.push_back(*it->second.distinctiveness);
      }
    }
    report.aggregates.push_back(summarize_values(name, "relevance", rel));
    report.aggregates.push_back(summarize_values(name, "novelty", nov));
    report.aggregates.push_back(summarize_values(name, "distinctiveness", dis));
  }
  std::vector<double> ratio;
  for (const EvalRow& r : rows) ratio.push_back(r.novel_token_ratio);
  report.aggregates.push_back(summarize_values("novel_token_ratio", "novelty", ratio));
  report.rows = std::move(rows);
  return report;
}

std::string report_to_json(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["rows"] = nlohmann::ordered_json::array();
  for (const EvalRow& r : report.rows) {
    nlohmann::ordered_json row;
    row["set_id"] = r.set_id;
    row["context_id"] = r.context_id;
    for (const auto& [name, s] : r.scores) {
      nlohmann::ordered_json m;
      m["relevance"] = s.relevance;
      m["novelty"] = s.novelty;
      m["distinctiveness"] = s.distinctiveness ? nlohmann::ordered_json(*s.distinctiveness)
                                               : nlohmann::ordered_json(nullptr);
      if (s.clamped) m["clamped"] = true;
      row[name] = std::move(m);
    }
    row["novel_token_ratio"] = r.novel_token_ratio;
    j["rows"].push_back(std::move(row));
  }
  j["aggregates"] = nlohmann::ordered_json::array();
  for (const Aggregate& a : report.aggregates) {
    j["aggregates"].push_back({{"metric", a.metric},
                               {"criterion", a.criterion},
                               {"mean", a.mean},
                               {"stderr", a.stderr_},
                               {"n", a.n}});
  }
  return j.dump(2) + "\n";
}

std::string report_to_csv(const EvalReport& report) {
  std::ostringstream out;
  out << "metric,criterion,mean,stderr,n\n";
  for (const Aggregate& a : report.aggregates) {
    out << a.metric << ',' << a.criterion << ',' << fmt(a.mean) << ',' << fmt(a.stderr_) << ','
        << a.n << '\n';
  }
  return out.str();
}

}  // namespace pdsum
