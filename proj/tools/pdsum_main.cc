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

// pdsum command-line driver: run, sweep and synth subcommands.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pdsum/error.h"
#include "pdsum/pipeline.h"
#include "pdsum/synth.h"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

struct RunFlags {
  std::string corpus;
  std::string embeddings;
  std::size_t hash_dim = 0;
  std::string contexts = "daily";
  std::string method = "pdsum";
  double gamma = 0.5;
  double tau = 0.2;
  std::size_t epochs = 5;
  std::size_t batch_size = 64;
  double lr = 1e-5;
  std::size_t heads = 2;
  std::size_t top_n = 5;
  std::size_t summary_sentences = 1;
  std::size_t summary_tokens = 0;
  std::string refs;
  std::string state;
  bool resume = false;
  std::string out = "pdsum-out";
  std::uint64_t seed = 0;
  std::size_t min_docs = 1;
  std::size_t min_lifespan = 1;
  std::size_t max_idle = 0;
  bool phrases = false;
};

void add_run_flags(CLI::App* app, RunFlags& f) {
  app->add_option("--corpus", f.corpus, "Corpus JSONL")->required();
  auto* emb = app->add_option("--embeddings", f.embeddings, "Sentence embedding file (EMB1 or JSONL)");
  auto* hash = app->add_option("--hash-dim", f.hash_dim, "Use the hash embedder with this dim");
  emb->excludes(hash);
  app->add_option("--contexts", f.contexts, "Context mode")
      ->check(CLI::IsMember({"daily", "ref-gap"}));
  app->add_option("--method", f.method, "Summarizer")
      ->check(CLI::IsMember({"pdsum", "sentcent", "doccent", "incsentcent", "incdoccent"}));
  app->add_option("--gamma", f.gamma, "Distillation ratio in [0,1]")->capture_default_str();
  app->add_option("--tau", f.tau, "Contrastive temperature")->capture_default_str();
  app->add_option("--epochs", f.epochs, "Training epochs per context")->capture_default_str();
  app->add_option("--batch-size", f.batch_size, "Documents per step")->capture_default_str();
  app->add_option("--lr", f.lr, "Adam learning rate")->capture_default_str();
  app->add_option("--heads", f.heads, "Attention heads")->capture_default_str();
  app->add_option("--top-n-phrases", f.top_n, "Phrases kept per set")->capture_default_str();
  auto* ss = app->add_option("--summary-sentences", f.summary_sentences, "Sentences per summary");
  auto* st = app->add_option("--summary-tokens", f.summary_tokens, "Token budget per summary");
  ss->excludes(st);
  app->add_option("--refs", f.refs, "Reference summaries JSONL (enables evaluation)");
  app->add_option("--state", f.state, "State file written after the run");
  app->add_flag("--resume", f.resume, "Load --state first when it exists");
  app->add_option("--out", f.out, "Output directory")->capture_default_str();
  app->add_option("--seed", f.seed, "Root seed")->capture_default_str();
  app->add_option("--min-docs-per-set", f.min_docs, "Drop sets with fewer docs in a context");
  app->add_option("--min-lifespan-docs", f.min_lifespan, "Drop sets with fewer docs overall");
  app->add_option("--max-idle-contexts", f.max_idle, "Evict sets idle this long (0 = never)");
  app->add_flag("--phrases", f.phrases, "Also write phrases.jsonl");
}

pdsum::RunConfig to_config(const RunFlags& f) {
  pdsum::RunConfig c;
  c.corpus = f.corpus;
  if (!f.embeddings.empty()) c.embeddings = f.embeddings;
  c.hash_dim = f.hash_dim;
  c.context_mode = f.contexts == "ref-gap" ? pdsum::ContextMode::kRefGap : pdsum::ContextMode::kDaily;
  c.method = pdsum::parse_method(f.method);
  c.train.gamma = f.gamma;
  c.train.tau = f.tau;
  c.train.epochs = f.epochs;
  c.train.batch_size = f.batch_size;
  c.train.learning_rate = f.lr;
  c.train.heads = f.heads;
  c.top_n = f.top_n;
  if (f.summary_tokens > 0) {
    c.size.tokens = f.summary_tokens;
    c.size.sentences = 0;
  } else {
    c.size.sentences = f.summary_sentences;
  }
  if (!f.refs.empty()) c.refs = f.refs;
  if (!f.state.empty()) c.state_path = f.state;
  c.resume = f.resume;
  c.out = f.out;
  c.seed = f.seed;
  c.min_docs_per_set = f.min_docs;
  c.min_lifespan_docs = f.min_lifespan;
  c.max_idle_contexts = f.max_idle;
  c.write_phrases = f.phrases;
  return c;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw pdsum::DataError("cannot write " + p.string());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pdsum: streaming summaries of evolving multi-document sets"};
  app.require_subcommand(1);

  RunFlags run_flags;
  CLI::App* run = app.add_subcommand("run", "Summarize a corpus stream");
  add_run_flags(run, run_flags);

  RunFlags sweep_flags;
  std::string sweep_param;
  std::vector<double> sweep_values;
  CLI::App* sw = app.add_subcommand("sweep", "Run once per parameter value and tabulate");
  add_run_flags(sw, sweep_flags);
  sw->add_option("--param", sweep_param, "Parameter to vary")
      ->required()
      ->check(CLI::IsMember({"gamma", "top_n", "epochs", "batch", "tau"}));
  sw->add_option("--values", sweep_values, "Values to try")->required()->delimiter(',');

  std::size_t n_sets = 3, docs_per = 10, n_contexts = 3;
  std::uint64_t synth_seed = 0;
  std::string synth_out = "synth";
  CLI::App* syn = app.add_subcommand("synth", "Write a synthetic planted-theme stream");
  syn->add_option("--sets", n_sets, "Number of sets")->capture_default_str();
  syn->add_option("--docs", docs_per, "Documents per set per context")->capture_default_str();
  syn->add_option("--contexts", n_contexts, "Number of daily contexts")->capture_default_str();
  syn->add_option("--seed", synth_seed, "Seed")->capture_default_str();
  syn->add_option("--out", synth_out, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*run) {
      pdsum::RunOutcome r = pdsum::run_pipeline(to_config(run_flags));
      std::cerr << "wrote " << r.summaries << " summaries to " << run_flags.out << "\n";
    } else if (*sw) {
      pdsum::SweepOutcome r = pdsum::sweep(to_config(sweep_flags),
                                           pdsum::parse_sweep_param(sweep_param), sweep_values);
      std::cout << r.csv;
    } else if (*syn) {
      pdsum::SyntheticStream s =
          pdsum::synth_stream(n_sets, docs_per, n_contexts, pdsum::ThemeConfig{}, synth_seed);
      std::filesystem::create_directories(synth_out);
      write_file(std::filesystem::path(synth_out) / "corpus.jsonl", pdsum::corpus_to_jsonl(s.docs));
      write_file(std::filesystem::path(synth_out) / "refs.jsonl",
                 pdsum::references_to_jsonl(s.refs));
    }
  } catch (const pdsum::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const pdsum::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const pdsum::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return 0;
}
