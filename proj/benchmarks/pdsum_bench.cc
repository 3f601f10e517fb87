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

#include <benchmark/benchmark.h>

#include <random>

#include "pdsum/encoder.h"
#include "pdsum/evaluation.h"
#include "pdsum/phrase.h"
#include "pdsum/pipeline.h"
#include "pdsum/rng.h"
#include "pdsum/synth.h"
#include "pdsum/trainer.h"

namespace {

using namespace pdsum;

Eigen::MatrixXd random_sentences(Eigen::Index n, Eigen::Index dim, std::uint64_t seed) {
  Rng rng = make_rng(seed, "bench/sentences", 0);
  std::normal_distribution<double> g;
  Eigen::MatrixXd m(n, dim);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = g(rng);
  return m;
}

void BM_ForwardDocument(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  EncoderParams p = EncoderParams::initialize(dim, 2, 1);
  Eigen::MatrixXd e = random_sentences(8, static_cast<Eigen::Index>(dim), 1);
  for (auto _ : state) benchmark::DoNotOptimize(forward_document(e, p));
}
BENCHMARK(BM_ForwardDocument)->Arg(32)->Arg(128)->Arg(384);

void BM_BackwardDocument(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  EncoderParams p = EncoderParams::initialize(dim, 2, 1);
  Eigen::MatrixXd e = random_sentences(8, static_cast<Eigen::Index>(dim), 2);
  DocumentForward fwd = forward_document(e, p);
  Eigen::VectorXd d_cd = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(dim));
  EncoderParams grad = p.zeros_like();
  for (auto _ : state) {
    backward_document(fwd, d_cd, p, grad);
    benchmark::ClobberMemory();
  }
}
BENCHMARK(BM_BackwardDocument)->Arg(32)->Arg(128)->Arg(384);

void BM_RankSetPhrases(benchmark::State& state) {
  SyntheticStream s = synth_stream(8, static_cast<std::size_t>(state.range(0)), 1, ThemeConfig{}, 3);
  RunConfig cfg;
  cfg.hash_dim = 16;
  std::vector<ContextBatch> ctx = build_contexts(s.docs, {}, cfg);
  for (auto _ : state) benchmark::DoNotOptimize(rank_set_phrases(ctx.front(), 10));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.docs.size()));
}
BENCHMARK(BM_RankSetPhrases)->Arg(25)->Arg(100);

void BM_RougeL(benchmark::State& state) {
  Rng rng = make_rng(4, "bench/rouge", 0);
  std::uniform_int_distribution<int> tok(0, 50);
  Tokens a(static_cast<std::size_t>(state.range(0))), b(a.size());
  for (auto& t : a) t = "w" + std::to_string(tok(rng));
  for (auto& t : b) t = "w" + std::to_string(tok(rng));
  for (auto _ : state) benchmark::DoNotOptimize(rouge_l(a, b));
}
BENCHMARK(BM_RougeL)->Arg(30)->Arg(120);

}  // namespace

BENCHMARK_MAIN();
