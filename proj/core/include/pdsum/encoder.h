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

#ifndef PDSUM_ENCODER_H_
#define PDSUM_ENCODER_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace pdsum {

using MatrixMap = Eigen::Map<Eigen::MatrixXd>;
using ConstMatrixMap = Eigen::Map<const Eigen::MatrixXd>;
using VectorMap = Eigen::Map<Eigen::VectorXd>;
using ConstVectorMap = Eigen::Map<const Eigen::VectorXd>;

// All learnable weights of the prototype encoder in one flat buffer.
//
// Blocks, in storage order (matrices column-major, rows x cols):
//   wq  dim x dim    bq  dim
//   wk  dim x dim
//   wv  dim x dim    bv  dim
//   wo  dim x dim    bo  dim
//   wf  dim x dim    bf  dim          feed-forward
//   ln_gain dim      ln_bias dim      layer norm
//   wa  dim x attn   ba  attn   va attn   attentive pooling
//
// Heads split the projection columns into `heads` contiguous slices. There is
// no key bias: it shifts every score of a query row equally, which softmax
// ignores. The same type doubles as a gradient buffer.
//
// Values are always representable as f32 so that checkpoints round-trip
// exactly; arithmetic is carried out in f64.
class EncoderParams {
 public:
  struct Block {
    std::string_view name;
    std::size_t offset;
    std::size_t rows;
    std::size_t cols;
  };

  EncoderParams() = default;
  // Zero-filled parameters of the given shape. attn_dim 0 means attn_dim = dim.
  EncoderParams(std::size_t dim, std::size_t heads, std::size_t attn_dim = 0);

  // Seeded uniform(-1/sqrt(dim), 1/sqrt(dim)) for projection, feed-forward and
  // pooling weights; zero biases; layer-norm gain 1.
  static EncoderParams initialize(std::size_t dim, std::size_t heads, std::uint64_t seed,
                                  std::size_t attn_dim = 0);

  std::size_t dim() const { return dim_; }
  std::size_t heads() const { return heads_; }
  std::size_t head_dim() const { return heads_ == 0 ? 0 : dim_ / heads_; }
  std::size_t attn_dim() const { return attn_dim_; }
  std::size_t size() const { return static_cast<std::size_t>(values_.size()); }

  Eigen::VectorXd& values() { return values_; }
  const Eigen::VectorXd& values() const { return values_; }
  const std::vector<Block>& blocks() const { return blocks_; }
  // Name of the block holding flat index i.
  std::string_view block_of(std::size_t i) const;

  MatrixMap wq() { return mat(0); }
  VectorMap bq() { return vec(1); }
  MatrixMap wk() { return mat(2); }
  MatrixMap wv() { return mat(3); }
  VectorMap bv() { return vec(4); }
  MatrixMap wo() { return mat(5); }
  VectorMap bo() { return vec(6); }
  MatrixMap wf() { return mat(7); }
  VectorMap bf() { return vec(8); }
  VectorMap ln_gain() { return vec(9); }
  VectorMap ln_bias() { return vec(10); }
  MatrixMap wa() { return mat(11); }
  VectorMap ba() { return vec(12); }
  VectorMap va() { return vec(13); }

  ConstMatrixMap wq() const { return mat(0); }
  ConstVectorMap bq() const { return vec(1); }
  ConstMatrixMap wk() const { return mat(2); }
  ConstMatrixMap wv() const { return mat(3); }
  ConstVectorMap bv() const { return vec(4); }
  ConstMatrixMap wo() const { return mat(5); }
  ConstVectorMap bo() const { return vec(6); }
  ConstMatrixMap wf() const { return mat(7); }
  ConstVectorMap bf() const { return vec(8); }
  ConstVectorMap ln_gain() const { return vec(9); }
  ConstVectorMap ln_bias() const { return vec(10); }
  ConstMatrixMap wa() const { return mat(11); }
  ConstVectorMap ba() const { return vec(12); }
  ConstVectorMap va() const { return vec(13); }

  // Zeroed buffer with this shape.
  EncoderParams zeros_like() const;
  bool same_shape(const EncoderParams& other) const;
  void round_to_f32();
  bool all_finite() const;

  bool operator==(const EncoderParams& other) const;

 private:
  MatrixMap mat(std::size_t b);
  ConstMatrixMap mat(std::size_t b) const;
  VectorMap vec(std::size_t b);
  ConstVectorMap vec(std::size_t b) const;

  std::size_t dim_ = 0;
  std::size_t heads_ = 0;
  std::size_t attn_dim_ = 0;
  std::vector<Block> blocks_;
  Eigen::VectorXd values_;
};

inline constexpr double kLayerNormEps = 1e-5;

// Intermediate values of one document's forward pass, kept for backprop.
struct DocumentForward {
  Eigen::MatrixXd input;                 // n x dim, frozen sentence embeddings
  Eigen::MatrixXd q, k, v;               // n x dim
  std::vector<Eigen::MatrixXd> attention;  // per head, n x n row-stochastic
  Eigen::MatrixXd heads_out;             // n x dim, concatenated head outputs
  Eigen::MatrixXd residual;              // attention output + input
  Eigen::MatrixXd normalized;            // standardized feed-forward output
  Eigen::VectorXd inv_std;               // per row
  Eigen::MatrixXd cs;                    // contextualized sentences, n x dim
  Eigen::MatrixXd pool_hidden;           // tanh(cs wa + ba), n x attn
  Eigen::VectorXd alpha;                 // sentence attention, n
  Eigen::VectorXd cd;                    // document vector, dim
};

// CS = LayerNorm(FF(MHS(E) + E)), no positional encoding.
Eigen::MatrixXd contextualize(const Eigen::MatrixXd& sentence_embeddings,
                              const EncoderParams& params);

struct PooledDocument {
  Eigen::VectorXd cd;
  Eigen::VectorXd alpha;
};

// alpha = softmax(tanh(cs wa + ba) va), cd = sum_k alpha_k cs_k.
PooledDocument attentive_pool(const Eigen::MatrixXd& cs, const EncoderParams& params);

DocumentForward forward_document(const Eigen::MatrixXd& sentence_embeddings,
                                 const EncoderParams& params);

// Accumulates dLoss/dparams into `grad` given dLoss/dcd.
void backward_document(const DocumentForward& fwd, const Eigen::VectorXd& d_cd,
                       const EncoderParams& params, EncoderParams& grad);

// "PDS1" checkpoint: magic, u32 format version, u32 dim, u32 heads,
// u32 attn_dim, u64 value count, then the flat buffer as little-endian f32
// in block order.
std::string serialize_checkpoint(const EncoderParams& params);
EncoderParams parse_checkpoint(std::string_view bytes);
void save_checkpoint(const EncoderParams& params, const std::filesystem::path& path);
EncoderParams load_checkpoint(const std::filesystem::path& path);

}  // namespace pdsum

#endif  // PDSUM_ENCODER_H_
