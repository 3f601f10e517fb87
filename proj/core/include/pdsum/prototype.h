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

#ifndef PDSUM_PROTOTYPE_H_
#define PDSUM_PROTOTYPE_H_

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pdsum/corpus.h"
#include "pdsum/phrase.h"

namespace pdsum {

struct SetPrototype {
  std::string set_id;
  Eigen::VectorXd accumulated;  // from learned document vectors + accumulated phrases
  Eigen::VectorXd fresh;        // from frozen mean embeddings + this context's phrases
  Eigen::VectorXd distilled;    // gamma * accumulated + (1 - gamma) * fresh
};

// Phrase-mass share of each document in its set. Uniform when the set holds
// no phrase mass at all.
std::vector<double> document_weights(std::span<const Document> docs, const SetPhrases& phrases);

Eigen::VectorXd weighted_sum(std::span<const Eigen::VectorXd> vectors,
                             std::span<const double> weights);

// Accumulated prototype over learned document vectors `cds` (one per doc).
Eigen::VectorXd set_prototype(std::span<const Eigen::VectorXd> cds,
                              std::span<const Document> docs, const SetPhrases& accumulated);

// New-context prototype over each document's mean initial sentence embedding.
Eigen::VectorXd new_set_prototype(std::span<const Eigen::MatrixXd> sentence_embeddings,
                                  std::span<const Document> docs, const SetPhrases& fresh);

// gamma * accumulated + (1 - gamma) * fresh; gamma must lie in [0, 1].
Eigen::VectorXd distill(const Eigen::VectorXd& accumulated, const Eigen::VectorXd& fresh,
                        double gamma);

// Throws NumericError when either vector has zero norm.
double cosine(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

struct DocumentLoss {
  double loss = 0.0;
  Eigen::VectorXd d_cd;  // dloss/dcd with prototypes held fixed
};

// -log softmax_own(cos(cd, R'_k) / tau) and its gradient w.r.t. cd.
DocumentLoss contrastive_loss(const Eigen::VectorXd& cd, std::size_t owner,
                              std::span<const Eigen::VectorXd> prototypes, double tau);

struct LabeledVector {
  Eigen::VectorXd cd;
  std::size_t owner = 0;
};

// Mean of contrastive_loss over the batch.
double reg_contrastive_loss(std::span<const LabeledVector> batch,
                            std::span<const Eigen::VectorXd> prototypes, double tau);

}  // namespace pdsum

#endif  // PDSUM_PROTOTYPE_H_
