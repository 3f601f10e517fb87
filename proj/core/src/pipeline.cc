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

#include "pdsum/pipeline.h"

#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "pdsum/baselines.h"
#include "pdsum/error.h"
#include "pdsum/phrase.h"
#include "pdsum/rng.h"
#include "pdsum/text.h"

namespace pdsum {

namespace {

constexpr std::string_view kMethodNames[] = {"pdsum", "sentcent", "doccent", "incsentcent",
                                             "incdoccent"};
constexpr std::string_view kSweepNames[] = {"gamma", "top_n", "epochs", "batch", "tau"};

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
  if (!out) throw DataError("write failed for " + path.string());
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const std::string& l : lines) {
    out += l;
    out += '\n';
  }
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::size_t to_count(double v, std::string_view what) {
  if (!(v >= 1.0) || v != static_cast<double>(static_cast<std::size_t>(v))) {
    throw UsageError(std::string(what) + " must be a positive integer, got " + fmt(v));
  }
  return static_cast<std::size_t>(v);
}

}  // namespace

std::string_view method_name(Method m) { return kMethodNames[static_cast<int>(m)]; }

Method parse_method(std::string_view name) {
  for (int i = 0; i < 5; ++i) {
    if (kMethodNames[i] == name) return static_cast<Method>(i);
  }
  throw UsageError("unknown method '" + std::string(name) + "'");
}

std::string_view sweep_param_name(SweepParam p) { return kSweepNames[static_cast<int>(p)]; }

SweepParam parse_sweep_param(std::string_view name) {
  for (int i = 0; i < 5; ++i) {
    if (kSweepNames[i] == name) return static_cast<SweepParam>(i);
  }
  throw UsageError("unknown sweep parameter '" + std::string(name) + "'");
}

void RunConfig::validate() const {
  train.validate();
  size.validate();
  if (top_n == 0) throw UsageError("top-n-phrases must be at least 1");
  if (embeddings && hash_dim > 0) {
    throw UsageError("--embeddings and --hash-dim are mutually exclusive");
  }
  if (!embeddings && hash_dim == 0) {
    throw UsageError("one of --embeddings or --hash-dim is required");
  }
  if (hash_dim > 0 && hash_dim < 8) throw UsageError("--hash-dim must be at least 8");
  if (context_mode == ContextMode::kRefGap && !refs) {
    throw UsageError("ref-gap contexts need --refs");
  }
  StreamConfig{context_mode, min_docs_per_set, min_lifespan_docs, seed}.validate();
}

std::vector<ContextBatch> build_contexts(const std::vector<Document>& docs,
                                         const std::vector<ReferenceSummary>& refs,
                                         const RunConfig& cfg) {
  StreamConfig sc{cfg.context_mode, cfg.min_docs_per_set, cfg.min_lifespan_docs, cfg.seed};
  if (cfg.context_mode == ContextMode::kRefGap) return build_contexts_refgap(docs, refs, sc);
  std::vector<ContextBatch> out = build_contexts_daily(docs, sc);
  if (!refs.empty()) attach_daily_references(out, refs);
  return out;
}

StreamResult run_stream(std::vector<ContextBatch> contexts, const RunConfig& cfg,
                        const SentenceEmbedder& embedder, StreamState initial,
                        const ContextCallback& on_context) {
  TrainConfig tc = cfg.train;
  tc.seed = cfg.seed;
  StreamResult res;
  res.state = std::move(initial);
  StreamState& st = res.state;
  const std::vector<std::unique_ptr<Metric>> metrics = default_metrics();
  const std::optional<double> gamma_field =
      cfg.method == Method::kPdsum ? std::optional<double>(tc.gamma) : std::nullopt;

  for (ContextBatch& ctx : contexts) {
    if (ctx.sets.empty()) continue;
    const std::int64_t cid = ctx.context_id;

    // Phrase ranker.
    std::map<std::string, SetPhrases> fresh = rank_set_phrases(ctx, cfg.top_n);
    std::map<std::string, SetPhrases> accumulated;
    for (const auto& [set_id, sp] : fresh) {
      const SetState* prev = st.find(set_id);
      accumulated[set_id] =
          accumulate_phrases(prev ? prev->accumulated : SetPhrases{}, sp, cfg.top_n);
      accumulated[set_id].set_id = set_id;
      if (cfg.write_phrases) res.phrase_lines.push_back(phrases_debug_line(accumulated[set_id], cid));
    }

    // Encoder and summary identifier, or a centroid baseline.
    std::map<std::string, Summary> summaries;
    if (cfg.method == Method::kPdsum) {
      if (!st.params) {
        st.params = EncoderParams::initialize(embedder.dim(), tc.heads,
                                              derive_seed(cfg.seed, "encoder/init", 0));
      } else if (st.params->dim() != embedder.dim()) {
        throw DataError("state encoder dim " + std::to_string(st.params->dim()) +
                        " does not match embedding dim " + std::to_string(embedder.dim()));
      }
      TrainResult tr = train_context(*st.params, ctx, accumulated, fresh, embedder, tc);
      if (!tr.params.all_finite()) {
        throw NumericError("encoder parameters diverged in context " + std::to_string(cid));
      }
      for (std::size_t e = 0; e < tr.loss_trace.size(); ++e) {
        res.losses.push_back({cid, e + 1, tr.loss_trace[e]});
      }
      st.params = std::move(tr.params);
      for (const auto& [set_id, docs] : ctx.sets) {
        summaries[set_id] = summarize_set(set_id, cid, docs, tr.encoding.at(set_id),
                                          accumulated.at(set_id), fresh.at(set_id), tc.gamma,
                                          cfg.size);
      }
    } else {
      const CentroidMode mode =
          (cfg.method == Method::kSentCent || cfg.method == Method::kIncSentCent)
              ? CentroidMode::kSentence
              : CentroidMode::kDocument;
      const bool incremental =
          cfg.method == Method::kIncSentCent || cfg.method == Method::kIncDocCent;
      for (const auto& [set_id, docs] : ctx.sets) {
        auto it = st.centroids.find(set_id);
        const CentroidState* prev = it == st.centroids.end() ? nullptr : &it->second;
        CentroidResult cr =
            centroid_summarize(set_id, cid, docs, mode, incremental, prev, embedder, cfg.size);
        summaries[set_id] = std::move(cr.summary);
        if (incremental) st.centroids[set_id] = std::move(cr.state);
      }
    }

    // Evaluation needs the previous summaries, so it runs before the update.
    std::vector<EvalInput> inputs;
    for (const auto& [set_id, ref] : ctx.ref_summaries) {
      auto it = summaries.find(set_id);
      if (it == summaries.end()) continue;
      const SetState* prev = st.find(set_id);
      inputs.push_back({set_id, cid, it->second.tokens(),
                        prev ? prev->previous_summary : Tokens{}, tokenize(ref)});
    }
    if (!inputs.empty()) {
      std::vector<EvalRow> rows = evaluate_context(inputs, metrics);
      res.eval_rows.insert(res.eval_rows.end(), std::make_move_iterator(rows.begin()),
                           std::make_move_iterator(rows.end()));
    }

    for (auto& [set_id, summary] : summaries) {
      const SetState* prev = st.find(set_id);
      st.sets[set_id] = update(prev ? *prev : SetState{set_id, {}, {}, 0, -1}, fresh.at(set_id),
                               summary, cid, cfg.top_n);
      res.summary_lines.push_back(
          summary_to_json_line(summary, std::string(method_name(cfg.method)), gamma_field));
      res.summaries.push_back(std::move(summary));
    }
    st.evict_idle(cid, cfg.max_idle_contexts);

    // Single pass: the context's documents are not needed any more.
    ctx.sets.clear();
    ctx.ref_summaries.clear();
    if (on_context) on_context(cid, st);
  }
  return res;
}

RunOutcome run_pipeline(const RunConfig& cfg) {
  cfg.validate();
  std::vector<Document> docs = load_corpus(cfg.corpus);
  std::vector<ReferenceSummary> refs;
  if (cfg.refs) refs = load_references(*cfg.refs);

  std::unique_ptr<EmbeddingStore> store;
  std::unique_ptr<SentenceEmbedder> embedder;
  if (cfg.embeddings) {
    store = std::make_unique<EmbeddingStore>(load_embedding_file(*cfg.embeddings));
    embedder = std::make_unique<StoreEmbedder>(*store);
  } else {
    embedder = std::make_unique<HashEmbedder>(cfg.hash_dim, cfg.seed);
  }

  StreamState initial;
  if (cfg.resume && cfg.state_path && std::filesystem::exists(*cfg.state_path)) {
    initial = load_state(*cfg.state_path);
  }

  std::vector<ContextBatch> contexts = build_contexts(docs, refs, cfg);
  docs.clear();
  docs.shrink_to_fit();
  StreamResult res = run_stream(std::move(contexts), cfg, *embedder, std::move(initial));

  std::error_code ec;
  std::filesystem::create_directories(cfg.out, ec);
  if (ec) throw DataError("cannot create output directory " + cfg.out.string());
  write_text(cfg.out / "summaries.jsonl", join_lines(res.summary_lines));
  std::ostringstream loss;
  loss << "context_id,epoch,mean_loss\n";
  for (const LossRow& r : res.losses) {
    loss << r.context_id << ',' << r.epoch << ',' << fmt(r.mean_loss) << '\n';
  }
  write_text(cfg.out / "loss.csv", loss.str());
  if (cfg.write_phrases) write_text(cfg.out / "phrases.jsonl", join_lines(res.phrase_lines));

  RunOutcome outcome;
  outcome.summaries = res.summaries.size();
  if (cfg.refs) {
    EvalReport report = aggregate(std::move(res.eval_rows));
    write_text(cfg.out / "report.json", report_to_json(report));
    write_text(cfg.out / "report.csv", report_to_csv(report));
    outcome.report = std::move(report);
  }
  if (cfg.state_path) save_state(res.state, *cfg.state_path);
  return outcome;
}

void apply_sweep_value(RunConfig& cfg, SweepParam param, double value) {
  switch (param) {
    case SweepParam::kGamma: cfg.train.gamma = value; break;
    case SweepParam::kTopN: cfg.top_n = to_count(value, "top_n"); break;
    case SweepParam::kEpochs: cfg.train.epochs = to_count(value, "epochs"); break;
    case SweepParam::kBatch: cfg.train.batch_size = to_count(value, "batch"); break;
    case SweepParam::kTau: cfg.train.tau = value; break;
  }
}

SweepOutcome sweep(const RunConfig& cfg, SweepParam param, const std::vector<double>& values) {
  if (values.empty()) throw UsageError("sweep needs at least one value");
  if (!cfg.refs) throw UsageError("sweep needs --refs for evaluation");
  // Validate every value before running anything.
  std::vector<RunConfig> runs;
  for (std::size_t i = 0; i < values.size(); ++i) {
    RunConfig rc = cfg;
    apply_sweep_value(rc, param, values[i]);
    rc.out = cfg.out / (std::string(sweep_param_name(param)) + "-" + std::to_string(i));
    if (cfg.state_path) {
      rc.state_path = rc.out / "state.pdst";
      rc.resume = false;
    }
    rc.validate();
    runs.push_back(std::move(rc));
  }
  SweepOutcome out;
  std::ostringstream csv;
  csv << "value,metric,criterion,mean,stderr\n";
  for (std::size_t i = 0; i < runs.size(); ++i) {
    RunOutcome r = run_pipeline(runs[i]);
    for (const Aggregate& a : r.report->aggregates) {
      csv << fmt(values[i]) << ',' << a.metric << ',' << a.criterion << ',' << fmt(a.mean) << ','
          << fmt(a.stderr_) << '\n';
    }
    out.values.push_back(values[i]);
    out.reports.push_back(std::move(*r.report));
  }
  out.csv = csv.str();
  std::error_code ec;
  std::filesystem::create_directories(cfg.out, ec);
  write_text(cfg.out / "sweep.csv", out.csv);
  return out;
}

}  // namespace pdsum
