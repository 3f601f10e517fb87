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

#ifndef PDSUM_PIPELINE_H_
#define PDSUM_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pdsum/corpus.h"
#include "pdsum/embedding.h"
#include "pdsum/evaluation.h"
#include "pdsum/state.h"
#include "pdsum/summary.h"
#include "pdsum/trainer.h"

namespace pdsum {

enum class Method { kPdsum, kSentCent, kDocCent, kIncSentCent, kIncDocCent };

std::string_view method_name(Method m);
Method parse_method(std::string_view name);

struct RunConfig {
  std::filesystem::path corpus;
  std::optional<std::filesystem::path> embeddings;
  std::size_t hash_dim = 0;  // > 0 selects the hash embedder
  ContextMode context_mode = ContextMode::kDaily;
  Method method = Method::kPdsum;
  TrainConfig train;
  std::size_t top_n = kDefaultTopPhrases;
  SummarySize size;
  std::filesystem::path out;
  std::optional<std::filesystem::path> state_path;
  bool resume = false;  // load state_path first when it exists
  std::optional<std::filesystem::path> refs;
  std::uint64_t seed = 0;
  std::size_t min_docs_per_set = 1;
  std::size_t min_lifespan_docs = 1;
  std::size_t max_idle_contexts = 0;
  bool write_phrases = false;

  // Throws UsageError on invalid values or conflicting embedding sources.
  void validate() const;
};

struct LossRow {
  std::int64_t context_id = 0;
  std::size_t epoch = 0;
  double mean_loss = 0.0;
};

struct StreamResult {
  std::vector<Summary> summaries;
  std::vector<std::string> summary_lines;  // JSONL, one per summary
  std::vector<std::string> phrase_lines;
  std::vector<LossRow> losses;
  std::vector<EvalRow> eval_rows;
  StreamState state;
};

// Called after each context finishes, once its documents are gone.
using ContextCallback = std::function<void(std::int64_t context_id, const StreamState&)>;

// In-memory core of run_pipeline: contexts are consumed in order and their
// documents cleared before the next one starts.
StreamResult run_stream(std::vector<ContextBatch> contexts, const RunConfig& cfg,
                        const SentenceEmbedder& embedder, StreamState initial = {},
                        const ContextCallback& on_context = {});

std::vector<ContextBatch> build_contexts(const std::vector<Document>& docs,
                                         const std::vector<ReferenceSummary>& refs,
                                         const RunConfig& cfg);

struct RunOutcome {
  std::size_t summaries = 0;
  std::optional<EvalReport> report;
};

// Reads inputs, runs the stream and writes summaries.jsonl, loss.csv,
// optional phrases.jsonl, report.json/report.csv (with refs) and the state file.
RunOutcome run_pipeline(const RunConfig& cfg);

enum class SweepParam { kGamma, kTopN, kEpochs, kBatch, kTau };
SweepParam parse_sweep_param(std::string_view name);
std::string_view sweep_param_name(SweepParam p);

struct SweepOutcome {
  std::vector<double> values;
  std::vector<EvalReport> reports;
  std::string csv;  // value,metric,criterion,mean,stderr
};

// One run_pipeline per value, each writing into out/<param>-<index>.
SweepOutcome sweep(const RunConfig& cfg, SweepParam param, const std::vector<double>& values);

void apply_sweep_value(RunConfig& cfg, SweepParam param, double value);

}  // namespace pdsum

#endif  // PDSUM_PIPELINE_H_
