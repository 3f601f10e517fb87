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

#include "pdsum/prototype.h"

#include <cmath>

#include "pdsum/error.h"

namespace pdsum {

std::vector<double> document_weights(std::span<const Document> docs, const SetPhrases& phrases) {
  if (docs.empty()) throw DataError("set prototype needs at least one document");
  std::vector<double> mass(docs.size());
  double total = 0.0;
  for (std::size_t j = 0; j < docs.size(); ++j) {
    mass[j] = phrase_mass(docs[j], phrases);
    total += mass[j];
  }
  std::vector<double> w(docs.size());
  for (std::size_t j = 0; j < docs.size(); ++j) {
    w[j] = total > 0.0 ? mass[j] / total : 1.0 / static_cast<double>(docs.size());
  }
  return w;
}

Eigen::VectorXd weighted_sum(std::span<const Eigen::VectorXd> vectors,
                             std::span<const double> weights) {
  if (vectors.empty() || vectors.size() != weights.size()) {
    throw DataError("weighted_sum needs matching non-empty inputs");
  }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(vectors[0].size());
  for (std::size_t j = 0; j < vectors.size(); ++j) out += weights[j] * vectors[j];
  return out;
}

Eigen::VectorXd set_prototype(std::span<const Eigen::VectorXd> cds,
                              std::span<const Document> docs, const SetPhrases& accumulated) {
  if (cds.size() != docs.size()) throw DataError("one document vector per document required");
  if (docs.size() == 1) return cds[0];
  std::vector<double> w = document_weights(docs, accumulated);
  return weighted_sum(cds, w);
}

Eigen::VectorXd new_set_prototype(std::span<const Eigen::MatrixXd> sentence_embeddings,
                                  std::span<const Document> docs, const SetPhrases& fresh) {
  if (sentence_embeddings.size() != docs.size()) {
    throw DataError("one embedding matrix per document required");
  }
  std::vector<Eigen::VectorXd> means;
  means.reserve(docs.size());
  for (const Eigen::MatrixXd& e : sentence_embeddings) {
    if (e.rows() == 0) throw DataError("document has no sentence embeddings");
    means.push_back(e.colwise().mean().transpose());
  }
  if (docs.size() == 1) return means[0];
  std::vector<double> w = document_weights(docs, fresh);
  return weighted_sum(means, w);
}

Eigen::VectorXd distill(const Eigen::VectorXd& accumulated, const Eigen::VectorXd& fresh,
                        double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw UsageError("distillation ratio must lie in [0,1], got " + std::to_string(gamma));
  }
  if (accumulated.size() != fresh.size()) throw DataError("prototype dims differ");
  return gamma * accumulated + (1.0 - gamma) * fresh;
}

double cosine(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  double na = a.norm();
  double nb = b.norm();
  if (na == 0.0 || nb == 0.0) throw NumericError("cosine of a zero-norm vector");
  return a.dot(b) / (na * nb);
}

DocumentLoss contrastive_loss(const Eigen::VectorXd& cd, std::size_t owner,
                              std::span<const Eigen::VectorXd> prototypes, double tau) {
  if (!(tau > 0.0)) throw UsageError("temperature must be positive");
  if (owner >= prototypes.size()) throw DataError("document owner has no prototype");
  const std::size_t k = prototypes.size();
  const double cd_norm = cd.norm();
  if (cd_norm == 0.0) throw NumericError("cosine of a zero-norm vector");
  Eigen::VectorXd cos(static_cast<Eigen::Index>(k));
  for (std::size_t i = 0; i < k; ++i) cos(static_cast<Eigen::Index>(i)) = cosine(cd, prototypes[i]);
  Eigen::VectorXd z = cos / tau;
  double mx = z.maxCoeff();
  Eigen::VectorXd e = (z.array() - mx).exp();
  double sum = e.sum();
  Eigen::VectorXd p = e / sum;

  DocumentLoss out;
  out.loss = std::log(sum) + mx - z(static_cast<Eigen::Index>(owner));
  if (k == 1) out.loss = 0.0;
  out.d_cd = Eigen::VectorXd::Zero(cd.size());
  for (std::size_t i = 0; i < k; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    double dz = p(ii) - (i == owner ? 1.0 : 0.0);
    if (dz == 0.0) continue;
    const Eigen::VectorXd& r = prototypes[i];
    Eigen::VectorXd dcos = r / (cd_norm * r.norm()) - cos(ii) * cd / (cd_norm * cd_norm);
    out.d_cd += (dz / tau) * dcos;
  }
  return out;
}

double reg_contrastive_loss(std::span<const LabeledVector> batch,
                            std::span<const Eigen::VectorXd> prototypes, double tau) {
  if (batch.empty()) throw DataError("empty contrastive batch");
  double total = 0.0;
  for (const LabeledVector& item : batch) {
    total += contrastive_loss(item.cd, item.owner, prototypes, tau).loss;
  }
  return total / static_cast<double>(batch.size());
}

}  // namespace pdsum
