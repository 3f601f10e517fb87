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

#include "pdsum/trainer.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pdsum/error.h"
#include "pdsum/rng.h"

namespace pdsum {
namespace {

using Eigen::VectorXd;

std::vector<VectorXd> distilled_targets(const ContextEncoding& enc) {
  std::vector<VectorXd> out;
  out.reserve(enc.size());
  for (const auto& [id, set] : enc) out.push_back(set.prototype.distilled);
  return out;
}

const SetPhrases& phrases_for(const std::map<std::string, SetPhrases>& m, const std::string& id) {
  static const SetPhrases kEmpty;
  auto it = m.find(id);
  return it == m.end() ? kEmpty : it->second;
}

}  // namespace

void TrainConfig::validate() const {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw UsageError("gamma must lie in [0,1], got " + std::to_string(gamma));
  }
  if (!(tau > 0.0)) throw UsageError("tau must be positive");
  if (batch_size < 1) throw UsageError("batch size must be >= 1");
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw UsageError("learning rate must be finite and non-negative");
  }
  if (heads < 1) throw UsageError("heads must be >= 1");
}

AdamOptimizer::AdamOptimizer(const EncoderParams& shape, double learning_rate, AdamConfig cfg)
    : lr_(learning_rate),
      cfg_(cfg),
      m_(VectorXd::Zero(static_cast<Eigen::Index>(shape.size()))),
      v_(VectorXd::Zero(static_cast<Eigen::Index>(shape.size()))) {}

void AdamOptimizer::step(EncoderParams& params, const EncoderParams& grad) {
  ++t_;
  const VectorXd& g = grad.values();
  m_ = cfg_.beta1 * m_ + (1.0 - cfg_.beta1) * g;
  v_ = cfg_.beta2 * v_ + (1.0 - cfg_.beta2) * g.cwiseProduct(g);
  const double c1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  VectorXd update = lr_ * (m_ / c1).array() / ((v_ / c2).array().sqrt() + cfg_.eps);
  params.values() -= update;
  params.round_to_f32();
  if (!params.all_finite()) throw NumericError("encoder parameters became non-finite");
}

ContextEmbeddings embed_context(const ContextBatch& context, const SentenceEmbedder& embedder) {
  ContextEmbeddings out;
  for (const auto& [set_id, docs] : context.sets) {
    auto& list = out[set_id];
    list.reserve(docs.size());
    for (const Document& d : docs) list.push_back(embedder.embed(d));
  }
  return out;
}

ContextEncoding encode_context(const EncoderParams& params, const ContextBatch& context,
                               const ContextEmbeddings& embeddings,
                               const std::map<std::string, SetPhrases>& accumulated,
                               const std::map<std::string, SetPhrases>& fresh, double gamma) {
  ContextEncoding out;
  for (const auto& [set_id, docs] : context.sets) {
    if (docs.empty()) throw DataError("set '" + set_id + "' has no documents");
    const auto& embs = embeddings.at(set_id);
    SetEncoding enc;
    std::vector<VectorXd> cds;
    cds.reserve(docs.size());
    for (std::size_t j = 0; j < docs.size(); ++j) {
      DocumentForward f = forward_document(embs[j], params);
      cds.push_back(f.cd);
      enc.docs.push_back({docs[j].doc_id, std::move(f.cd), std::move(f.alpha)});
    }
    enc.prototype.set_id = set_id;
    enc.prototype.accumulated = set_prototype(cds, docs, phrases_for(accumulated, set_id));
    enc.prototype.fresh = new_set_prototype(embs, docs, phrases_for(fresh, set_id));
    enc.prototype.distilled = distill(enc.prototype.accumulated, enc.prototype.fresh, gamma);
    out.emplace(set_id, std::move(enc));
  }
  return out;
}

double prototype_margin(const ContextEncoding& encoding) {
  if (encoding.size() < 2) return 0.0;
  double own = 0.0;
  double other = 0.0;
  std::size_t n_own = 0;
  std::size_t n_other = 0;
  for (const auto& [id, set] : encoding) {
    for (const DocumentEncoding& d : set.docs) {
      for (const auto& [pid, proto] : encoding) {
        double c = cosine(d.cd, proto.prototype.distilled);
        if (pid == id) {
          own += c;
          ++n_own;
        } else {
          other += c;
          ++n_other;
        }
      }
    }
  }
  return own / static_cast<double>(n_own) - other / static_cast<double>(n_other);
}

TrainResult train_context(const EncoderParams& params, const ContextBatch& context,
                          const std::map<std::string, SetPhrases>& accumulated,
                          const std::map<std::string, SetPhrases>& fresh,
                          const SentenceEmbedder& embedder, const TrainConfig& cfg) {
  return train_context(params, context, accumulated, fresh, embed_context(context, embedder), cfg);
}

TrainResult train_context(const EncoderParams& params, const ContextBatch& context,
                          const std::map<std::string, SetPhrases>& accumulated,
                          const std::map<std::string, SetPhrases>& fresh,
                          const ContextEmbeddings& embeddings, const TrainConfig& cfg) {
  cfg.validate();
  if (context.sets.empty()) throw DataError("cannot train on an empty context");

  TrainResult result;
  result.params = params;
  if (context.sets.size() < 2) {
    result.encoding = encode_context(result.params, context, embeddings, accumulated, fresh, cfg.gamma);
    return result;
  }

  struct Item {
    const Eigen::MatrixXd* emb;
    std::size_t owner;
  };
  std::vector<Item> items;
  std::size_t owner = 0;
  for (const auto& [set_id, docs] : context.sets) {
    const auto& embs = embeddings.at(set_id);
    for (std::size_t j = 0; j < docs.size(); ++j) items.push_back({&embs[j], owner});
    ++owner;
  }

  Rng rng = make_rng(cfg.seed, "train/shuffle", static_cast<std::uint64_t>(context.context_id));
  AdamOptimizer adam(result.params, cfg.learning_rate);
  std::vector<std::size_t> order(items.size());
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    ContextEncoding enc =
        encode_context(result.params, context, embeddings, accumulated, fresh, cfg.gamma);
    const std::vector<VectorXd> targets = distilled_targets(enc);

    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), start + cfg.batch_size);
      const double inv_b = 1.0 / static_cast<double>(end - start);
      EncoderParams grad = result.params.zeros_like();
      for (std::size_t i = start; i < end; ++i) {
        const Item& item = items[order[i]];
        DocumentForward f = forward_document(*item.emb, result.params);
        DocumentLoss dl = contrastive_loss(f.cd, item.owner, targets, cfg.tau);
        loss_sum += dl.loss;
        backward_document(f, dl.d_cd * inv_b, result.params, grad);
      }
      adam.step(result.params, grad);
    }
    result.loss_trace.push_back(loss_sum / static_cast<double>(items.size()));
  }
  result.encoding = encode_context(result.params, context, embeddings, accumulated, fresh, cfg.gamma);
  return result;
}

EncoderParams batch_gradient(const EncoderParams& params, const MicroBatch& batch, double tau,
                             double* loss) {
  if (batch.embeddings.empty() || batch.embeddings.size() != batch.owners.size()) {
    throw DataError("micro-batch needs one owner per document");
  }
  EncoderParams grad = params.zeros_like();
  const double inv_b = 1.0 / static_cast<double>(batch.embeddings.size());
  double total = 0.0;
  for (std::size_t i = 0; i < batch.embeddings.size(); ++i) {
    DocumentForward f = forward_document(batch.embeddings[i], params);
    DocumentLoss dl = contrastive_loss(f.cd, batch.owners[i], batch.prototypes, tau);
    total += dl.loss;
    backward_document(f, dl.d_cd * inv_b, params, grad);
  }
  if (loss != nullptr) *loss = total * inv_b;
  return grad;
}

double batch_loss(const EncoderParams& params, const MicroBatch& batch, double tau) {
  if (batch.embeddings.empty() || batch.embeddings.size() != batch.owners.size()) {
    throw DataError("micro-batch needs one owner per document");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < batch.embeddings.size(); ++i) {
    VectorXd cd = forward_document(batch.embeddings[i], params).cd;
    total += contrastive_loss(cd, batch.owners[i], batch.prototypes, tau).loss;
  }
  return total / static_cast<double>(batch.embeddings.size());
}

GradCheckResult grad_check(const EncoderParams& params, const MicroBatch& batch, double tau,
                           double step) {
  const EncoderParams analytic = batch_gradient(params, batch, tau);
  EncoderParams probe = params;
  GradCheckResult result;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    const double original = probe.values()(ii);
    probe.values()(ii) = original + step;
    const double up = batch_loss(probe, batch, tau);
    probe.values()(ii) = original - step;
    const double down = batch_loss(probe, batch, tau);
    probe.values()(ii) = original;
    const double numeric = (up - down) / (2.0 * step);
    const double a = analytic.values()(ii);
    const double rel =
        std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), 1e-8});
    if (i == 0 || rel > result.max_rel_error) {
      result.max_rel_error = rel;
      result.worst_index = i;
      result.worst_block = std::string(params.block_of(i));
    }
  }
  return result;
}

}  // namespace pdsum
