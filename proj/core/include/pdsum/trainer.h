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

#ifndef PDSUM_TRAINER_H_
#define PDSUM_TRAINER_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pdsum/corpus.h"
#include "pdsum/embedding.h"
#include "pdsum/encoder.h"
#include "pdsum/phrase.h"
#include "pdsum/prototype.h"

namespace pdsum {

struct TrainConfig {
  double gamma = 0.5;
  double tau = 0.2;
  std::size_t epochs = 5;
  std::size_t batch_size = 64;
  double learning_rate = 1e-5;
  std::size_t heads = 2;
  std::uint64_t seed = 0;

  void validate() const;
};

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Adam over the flat parameter buffer. Parameters are rounded back to f32
// after every step.
class AdamOptimizer {
 public:
  AdamOptimizer(const EncoderParams& shape, double learning_rate, AdamConfig cfg = {});
  void step(EncoderParams& params, const EncoderParams& grad);
  std::size_t steps() const { return t_; }

 private:
  double lr_;
  AdamConfig cfg_;
  Eigen::VectorXd m_;
  Eigen::VectorXd v_;
  std::size_t t_ = 0;
};

struct DocumentEncoding {
  std::string doc_id;
  Eigen::VectorXd cd;
  Eigen::VectorXd alpha;
};

struct SetEncoding {
  SetPrototype prototype;
  std::vector<DocumentEncoding> docs;  // same order as the context's documents
};

using ContextEncoding = std::map<std::string, SetEncoding>;

// Initial sentence embeddings of a context, per set, aligned with its documents.
using ContextEmbeddings = std::map<std::string, std::vector<Eigen::MatrixXd>>;

ContextEmbeddings embed_context(const ContextBatch& context, const SentenceEmbedder& embedder);

// Forward pass over every document plus accumulated, new and distilled prototypes.
ContextEncoding encode_context(const EncoderParams& params, const ContextBatch& context,
                               const ContextEmbeddings& embeddings,
                               const std::map<std::string, SetPhrases>& accumulated,
                               const std::map<std::string, SetPhrases>& fresh, double gamma);

// mean cos(cd, R'_own) - mean cos(cd, R'_other); 0 for single-set contexts.
double prototype_margin(const ContextEncoding& encoding);

struct TrainResult {
  EncoderParams params;
  std::vector<double> loss_trace;  // mean loss per epoch; empty when no step ran
  ContextEncoding encoding;        // computed with the returned params
};

// Per epoch: encode all documents, freeze distilled prototypes as targets,
// then shuffled minibatch Adam steps on the contrastive loss. Single-set
// contexts skip optimization.
TrainResult train_context(const EncoderParams& params, const ContextBatch& context,
                          const std::map<std::string, SetPhrases>& accumulated,
                          const std::map<std::string, SetPhrases>& fresh,
                          const SentenceEmbedder& embedder, const TrainConfig& cfg);

TrainResult train_context(const EncoderParams& params, const ContextBatch& context,
                          const std::map<std::string, SetPhrases>& accumulated,
                          const std::map<std::string, SetPhrases>& fresh,
                          const ContextEmbeddings& embeddings, const TrainConfig& cfg);

// A batch of documents with frozen prototype targets, for loss/gradient
// evaluation outside a full context.
struct MicroBatch {
  std::vector<Eigen::MatrixXd> embeddings;
  std::vector<std::size_t> owners;
  std::vector<Eigen::VectorXd> prototypes;
};

double batch_loss(const EncoderParams& params, const MicroBatch& batch, double tau);
EncoderParams batch_gradient(const EncoderParams& params, const MicroBatch& batch, double tau,
                             double* loss = nullptr);

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::size_t worst_index = 0;
  std::string worst_block;
};

// Compares the analytical gradient against central differences per scalar:
// |g_a - g_n| / max(|g_a|, |g_n|, 1e-8), maximised over all parameters.
GradCheckResult grad_check(const EncoderParams& params, const MicroBatch& batch, double tau,
                           double step);

}  // namespace pdsum

#endif  // PDSUM_TRAINER_H_
