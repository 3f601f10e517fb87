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

#include "pdsum/encoder.h"

#include <cmath>
#include <random>

#include "pdsum/binary_io.h"
#include "pdsum/error.h"
#include "pdsum/rng.h"

namespace pdsum {
namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr std::string_view kCheckpointMagic = "PDS1";
constexpr std::uint32_t kCheckpointVersion = 1;

Index ix(std::size_t n) { return static_cast<Index>(n); }

// Row-wise softmax in place, shifted by the row max.
void softmax_rows(MatrixXd& m) {
  for (Index r = 0; r < m.rows(); ++r) {
    double mx = m.row(r).maxCoeff();
    m.row(r) = (m.row(r).array() - mx).exp();
    m.row(r) /= m.row(r).sum();
  }
}

VectorXd softmax(const VectorXd& z) {
  VectorXd e = (z.array() - z.maxCoeff()).exp();
  return e / e.sum();
}

void check_input(const MatrixXd& emb, const EncoderParams& params) {
  if (params.dim() == 0) throw UsageError("encoder parameters are empty");
  if (emb.rows() < 1) throw DataError("document has no sentences");
  if (emb.cols() != ix(params.dim())) {
    throw DataError("embedding dim " + std::to_string(emb.cols()) +
                    " does not match encoder dim " + std::to_string(params.dim()));
  }
  if (!emb.allFinite()) throw NumericError("non-finite sentence embedding");
}

}  // namespace

EncoderParams::EncoderParams(std::size_t dim, std::size_t heads, std::size_t attn_dim)
    : dim_(dim), heads_(heads), attn_dim_(attn_dim == 0 ? dim : attn_dim) {
  if (dim == 0 || heads == 0 || dim % heads != 0) {
    throw UsageError("encoder dim " + std::to_string(dim) + " must be a positive multiple of heads " +
                     std::to_string(heads));
  }
  const std::size_t h = dim_;
  const std::size_t a = attn_dim_;
  std::size_t offset = 0;
  auto add = [&](std::string_view name, std::size_t rows, std::size_t cols) {
    blocks_.push_back({name, offset, rows, cols});
    offset += rows * cols;
  };
  add("wq", h, h);
  add("bq", h, 1);
  add("wk", h, h);
  add("wv", h, h);
  add("bv", h, 1);
  add("wo", h, h);
  add("bo", h, 1);
  add("wf", h, h);
  add("bf", h, 1);
  add("ln_gain", h, 1);
  add("ln_bias", h, 1);
  add("wa", h, a);
  add("ba", a, 1);
  add("va", a, 1);
  values_ = VectorXd::Zero(ix(offset));
}

EncoderParams EncoderParams::initialize(std::size_t dim, std::size_t heads, std::uint64_t seed,
                                        std::size_t attn_dim) {
  EncoderParams p(dim, heads, attn_dim);
  Rng rng = make_rng(seed, "encoder/init");
  const double bound = 1.0 / std::sqrt(static_cast<double>(dim));
  std::uniform_real_distribution<double> uniform(-bound, bound);
  auto fill = [&](auto block) {
    for (Index i = 0; i < block.size(); ++i) block.data()[i] = uniform(rng);
  };
  fill(p.wq());
  fill(p.wk());
  fill(p.wv());
  fill(p.wo());
  fill(p.wf());
  fill(p.wa());
  fill(p.va());
  p.ln_gain().setOnes();
  p.round_to_f32();
  return p;
}

std::string_view EncoderParams::block_of(std::size_t i) const {
  for (const Block& b : blocks_) {
    if (i >= b.offset && i < b.offset + b.rows * b.cols) return b.name;
  }
  return "?";
}

MatrixMap EncoderParams::mat(std::size_t b) {
  const Block& k = blocks_.at(b);
  return MatrixMap(values_.data() + k.offset, ix(k.rows), ix(k.cols));
}
ConstMatrixMap EncoderParams::mat(std::size_t b) const {
  const Block& k = blocks_.at(b);
  return ConstMatrixMap(values_.data() + k.offset, ix(k.rows), ix(k.cols));
}
VectorMap EncoderParams::vec(std::size_t b) {
  const Block& k = blocks_.at(b);
  return VectorMap(values_.data() + k.offset, ix(k.rows * k.cols));
}
ConstVectorMap EncoderParams::vec(std::size_t b) const {
  const Block& k = blocks_.at(b);
  return ConstVectorMap(values_.data() + k.offset, ix(k.rows * k.cols));
}

EncoderParams EncoderParams::zeros_like() const {
  EncoderParams z = *this;
  z.values_.setZero();
  return z;
}

bool EncoderParams::same_shape(const EncoderParams& other) const {
  return dim_ == other.dim_ && heads_ == other.heads_ && attn_dim_ == other.attn_dim_;
}

void EncoderParams::round_to_f32() {
  for (Index i = 0; i < values_.size(); ++i) {
    values_(i) = static_cast<double>(static_cast<float>(values_(i)));
  }
}

bool EncoderParams::all_finite() const { return values_.allFinite(); }

bool EncoderParams::operator==(const EncoderParams& other) const {
  return same_shape(other) && values_.size() == other.values_.size() &&
         (values_.array() == other.values_.array()).all();
}

DocumentForward forward_document(const MatrixXd& emb, const EncoderParams& p) {
  check_input(emb, p);
  DocumentForward f;
  const Index n = emb.rows();
  const Index dh = ix(p.head_dim());
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));
  f.input = emb;

  f.q = emb * p.wq();
  f.q.rowwise() += p.bq().transpose();
  f.k = emb * p.wk();
  f.v = emb * p.wv();
  f.v.rowwise() += p.bv().transpose();

  f.heads_out.resize(n, ix(p.dim()));
  f.attention.resize(p.heads());
  for (std::size_t h = 0; h < p.heads(); ++h) {
    const Index c0 = ix(h) * dh;
    MatrixXd scores = f.q.middleCols(c0, dh) * f.k.middleCols(c0, dh).transpose() * scale;
    softmax_rows(scores);
    f.heads_out.middleCols(c0, dh) = scores * f.v.middleCols(c0, dh);
    f.attention[h] = std::move(scores);
  }
  f.residual = f.heads_out * p.wo();
  f.residual.rowwise() += p.bo().transpose();
  f.residual += emb;

  MatrixXd ff = f.residual * p.wf();
  ff.rowwise() += p.bf().transpose();
  f.normalized.resize(n, ff.cols());
  f.inv_std.resize(n);
  for (Index r = 0; r < n; ++r) {
    double mean = ff.row(r).mean();
    Eigen::RowVectorXd centered = ff.row(r).array() - mean;
    double var = centered.squaredNorm() / static_cast<double>(ff.cols());
    double inv = 1.0 / std::sqrt(var + kLayerNormEps);
    f.inv_std(r) = inv;
    f.normalized.row(r) = centered * inv;
  }
  f.cs = f.normalized.array().rowwise() * p.ln_gain().transpose().array();
  f.cs.rowwise() += p.ln_bias().transpose();

  MatrixXd pre = f.cs * p.wa();
  pre.rowwise() += p.ba().transpose();
  f.pool_hidden = pre.array().tanh();
  f.alpha = softmax(f.pool_hidden * p.va());
  f.cd = f.cs.transpose() * f.alpha;
  return f;
}

MatrixXd contextualize(const MatrixXd& emb, const EncoderParams& params) {
  return forward_document(emb, params).cs;
}

PooledDocument attentive_pool(const MatrixXd& cs, const EncoderParams& p) {
  if (cs.rows() < 1) throw DataError("document has no sentences");
  if (cs.cols() != ix(p.dim())) throw DataError("contextualized dim does not match encoder");
  MatrixXd pre = cs * p.wa();
  pre.rowwise() += p.ba().transpose();
  MatrixXd hidden = pre.array().tanh();
  PooledDocument out;
  out.alpha = softmax(hidden * p.va());
  out.cd = cs.transpose() * out.alpha;
  return out;
}

void backward_document(const DocumentForward& f, const VectorXd& d_cd, const EncoderParams& p,
                       EncoderParams& g) {
  const Index n = f.cs.rows();
  const Index dh = ix(p.head_dim());
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));

  // Attentive pooling.
  MatrixXd d_cs = f.alpha * d_cd.transpose();
  VectorXd d_alpha = f.cs * d_cd;
  VectorXd d_score = f.alpha.array() * (d_alpha.array() - f.alpha.dot(d_alpha));
  g.va() += f.pool_hidden.transpose() * d_score;
  MatrixXd d_pre = (d_score * p.va().transpose()).array() * (1.0 - f.pool_hidden.array().square());
  g.wa() += f.cs.transpose() * d_pre;
  g.ba() += d_pre.colwise().sum().transpose();
  d_cs += d_pre * p.wa().transpose();

  // Layer norm.
  g.ln_gain() += (d_cs.array() * f.normalized.array()).colwise().sum().transpose().matrix();
  g.ln_bias() += d_cs.colwise().sum().transpose();
  MatrixXd d_norm = d_cs.array().rowwise() * p.ln_gain().transpose().array();
  MatrixXd d_ff(n, d_norm.cols());
  for (Index r = 0; r < n; ++r) {
    double mean_d = d_norm.row(r).mean();
    double mean_dx = d_norm.row(r).dot(f.normalized.row(r)) / static_cast<double>(d_norm.cols());
    d_ff.row(r) = f.inv_std(r) *
                  (d_norm.row(r).array() - mean_d - f.normalized.row(r).array() * mean_dx).matrix();
  }

  // Feed-forward.
  g.wf() += f.residual.transpose() * d_ff;
  g.bf() += d_ff.colwise().sum().transpose();
  MatrixXd d_res = d_ff * p.wf().transpose();

  // Output projection; the residual's input branch is frozen.
  g.wo() += f.heads_out.transpose() * d_res;
  g.bo() += d_res.colwise().sum().transpose();
  MatrixXd d_heads = d_res * p.wo().transpose();

  MatrixXd d_q(n, ix(p.dim()));
  MatrixXd d_k(n, ix(p.dim()));
  MatrixXd d_v(n, ix(p.dim()));
  for (std::size_t h = 0; h < p.heads(); ++h) {
    const Index c0 = ix(h) * dh;
    const MatrixXd& a = f.attention[h];
    auto d_o = d_heads.middleCols(c0, dh);
    MatrixXd d_a = d_o * f.v.middleCols(c0, dh).transpose();
    d_v.middleCols(c0, dh) = a.transpose() * d_o;
    VectorXd row_dot = (d_a.array() * a.array()).rowwise().sum();
    MatrixXd d_s = a.array() * (d_a.colwise() - row_dot).array();
    d_q.middleCols(c0, dh) = d_s * f.k.middleCols(c0, dh) * scale;
    d_k.middleCols(c0, dh) = d_s.transpose() * f.q.middleCols(c0, dh) * scale;
  }
  g.wq() += f.input.transpose() * d_q;
  g.bq() += d_q.colwise().sum().transpose();
  g.wk() += f.input.transpose() * d_k;
  g.wv() += f.input.transpose() * d_v;
  g.bv() += d_v.colwise().sum().transpose();
}

std::string serialize_checkpoint(const EncoderParams& params) {
  binary::Writer out;
  out.put_bytes(kCheckpointMagic);
  out.put<std::uint32_t>(kCheckpointVersion);
  out.put<std::uint32_t>(static_cast<std::uint32_t>(params.dim()));
  out.put<std::uint32_t>(static_cast<std::uint32_t>(params.heads()));
  out.put<std::uint32_t>(static_cast<std::uint32_t>(params.attn_dim()));
  out.put<std::uint64_t>(params.size());
  for (Index i = 0; i < params.values().size(); ++i) {
    out.put<float>(static_cast<float>(params.values()(i)));
  }
  return out.take();
}

EncoderParams parse_checkpoint(std::string_view bytes) {
  binary::Reader in(bytes, "encoder checkpoint");
  if (in.get_bytes(kCheckpointMagic.size()) != kCheckpointMagic) {
    throw DataError("not an encoder checkpoint (bad magic)");
  }
  auto version = in.get<std::uint32_t>();
  if (version != kCheckpointVersion) {
    throw DataError("encoder checkpoint version " + std::to_string(version) +
                    " is not supported (expected " + std::to_string(kCheckpointVersion) + ")");
  }
  auto dim = in.get<std::uint32_t>();
  auto heads = in.get<std::uint32_t>();
  auto attn = in.get<std::uint32_t>();
  auto count = in.get<std::uint64_t>();
  EncoderParams p;
  try {
    p = EncoderParams(dim, heads, attn);
  } catch (const UsageError& e) {
    throw DataError(std::string("encoder checkpoint header: ") + e.what());
  }
  if (count != p.size()) {
    throw DataError("encoder checkpoint holds " + std::to_string(count) +
                    " values, shape needs " + std::to_string(p.size()));
  }
  for (Index i = 0; i < p.values().size(); ++i) p.values()(i) = in.get<float>();
  if (!in.done()) throw DataError("encoder checkpoint has trailing bytes");
  if (!p.all_finite()) throw NumericError("encoder checkpoint has non-finite values");
  return p;
}

void save_checkpoint(const EncoderParams& params, const std::filesystem::path& path) {
  binary::write_binary_file(path.string(), serialize_checkpoint(params));
}

EncoderParams load_checkpoint(const std::filesystem::path& path) {
  return parse_checkpoint(binary::read_binary_file(path.string()));
}

}  // namespace pdsum
