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

#ifndef PDSUM_EVALUATION_H_
#define PDSUM_EVALUATION_H_

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pdsum {

using Tokens = std::vector<std::string>;

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Clipped n-gram overlap, n in {1, 2}. Empty candidate or reference gives zeros.
RougeScore rouge_n(const Tokens& candidate, const Tokens& reference, int n);
// Longest-common-subsequence based.
RougeScore rouge_l(const Tokens& candidate, const Tokens& reference);

// Multiset difference in candidate order; earliest matches are dropped first.
Tokens token_diff(const Tokens& summary, const Tokens& previous);

// Pluggable similarity F(S, G). Only ROUGE F1 variants ship.
class Metric {
 public:
  virtual ~Metric() = default;
  virtual std::string_view name() const = 0;
  virtual double score(const Tokens& summary, const Tokens& reference) const = 0;
};

class RougeMetric final : public Metric {
 public:
  enum class Kind { kR1, kR2, kRL };
  explicit RougeMetric(Kind kind) : kind_(kind) {}
  std::string_view name() const override;
  double score(const Tokens& summary, const Tokens& reference) const override;

 private:
  Kind kind_;
};

// R1, R2, RL in that order.
std::vector<std::unique_ptr<Metric>> default_metrics();

inline constexpr double kDistinctivenessClamp = 1e-6;

double score_relevance(const Tokens& summary, const Tokens& reference, const Metric& metric);
double score_novelty(const Tokens& summary, const Tokens& previous, const Tokens& reference,
                     const Metric& metric);

struct Distinctiveness {
  std::optional<double> value;  // empty when no other reference exists
  bool clamped = false;
};

Distinctiveness score_distinctiveness(const Tokens& summary, const Tokens& own_reference,
                                      const std::vector<Tokens>& other_references,
                                      const Metric& metric);

enum class Criterion { kRelevance, kNovelty, kDistinctiveness };
std::string_view criterion_name(Criterion c);

struct MetricScores {
  double relevance = 0.0;
  double novelty = 0.0;
  std::optional<double> distinctiveness;
  bool clamped = false;
};

struct EvalRow {
  std::string set_id;
  std::int64_t context_id = 0;
  std::map<std::string, MetricScores> scores;  // by metric name
  double novel_token_ratio = 0.0;
};

struct EvalInput {
  std::string set_id;
  std::int64_t context_id = 0;
  Tokens summary;
  Tokens previous;
  Tokens reference;
};

// Scores every (set, context) input of one context against the others of the
// same context for distinctiveness.
std::vector<EvalRow> evaluate_context(const std::vector<EvalInput>& inputs,
                                      const std::vector<std::unique_ptr<Metric>>& metrics);

struct Aggregate {
  std::string metric;
  std::string criterion;
  double mean = 0.0;
  double stderr_ = 0.0;
  std::size_t n = 0;
};

struct EvalReport {
  std::vector<EvalRow> rows;
  std::vector<Aggregate> aggregates;  // per metric x criterion, then novel_token_ratio

  const Aggregate* find(std::string_view metric, std::string_view criterion) const;
};

// Mean and sample-stddev / sqrt(n) standard error. Clamped distinctiveness
// rows are excluded along with null ones.
Aggregate summarize_values(std::string metric, std::string criterion,
                           const std::vector<double>& values);
EvalReport aggregate(std::vector<EvalRow> rows);

std::string report_to_json(const EvalReport& report);
std::string report_to_csv(const EvalReport& report);

}  // namespace pdsum

#endif  // PDSUM_EVALUATION_H_
