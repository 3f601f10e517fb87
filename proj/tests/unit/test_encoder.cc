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

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "fixtures.h"
#include "pdsum/encoder.h"
#include "pdsum/error.h"

namespace pdsum {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Small deterministic "hand-set" parameter values, independent of the RNG.
EncoderParams tiny_params(std::size_t dim, std::size_t heads, std::size_t attn = 0) {
  EncoderParams p(dim, heads, attn);
  for (Eigen::Index i = 0; i < p.values().size(); ++i) {
    p.values()(i) = 0.1 * std::sin(0.7 * static_cast<double>(i) + 0.3);
  }
  p.ln_gain().array() += 1.0;
  return p;
}

using Grid = std::vector<std::vector<double>>;

Grid to_grid(const MatrixXd& m) {
  Grid g(static_cast<std::size_t>(m.rows()), std::vector<double>(static_cast<std::size_t>(m.cols())));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) g[r][c] = m(r, c);
  }
  return g;
}

// Scalar reference implementation of LayerNorm(FF(MHS(E) + E)), one loop per step.
Grid manual_contextualize(const Grid& e, const EncoderParams& p) {
  const std::size_t n = e.size(), h = p.dim(), heads = p.heads(), dh = h / heads;
  auto W = [&](ConstMatrixMap m, std::size_t r, std::size_t c) { return m(r, c); };
  Grid q(n, std::vector<double>(h)), k = q, v = q, att = q, res = q, ff = q, out = q;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < h; ++c) {
      double sq = p.bq()(c), sk = 0.0, sv = p.bv()(c);
      for (std::size_t r = 0; r < h; ++r) {
        sq += e[i][r] * W(p.wq(), r, c);
        sk += e[i][r] * W(p.wk(), r, c);
        sv += e[i][r] * W(p.wv(), r, c);
      }
      q[i][c] = sq;
      k[i][c] = sk;
      v[i][c] = sv;
    }
  }
  for (std::size_t hd = 0; hd < heads; ++hd) {
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> s(n);
      double mx = -1e300;
      for (std::size_t j = 0; j < n; ++j) {
        double dot = 0.0;
        for (std::size_t c = hd * dh; c < (hd + 1) * dh; ++c) dot += q[i][c] * k[j][c];
        s[j] = dot / std::sqrt(static_cast<double>(dh));
        mx = std::max(mx, s[j]);
      }
      double z = 0.0;
      for (double& x : s) z += (x = std::exp(x - mx));
      for (std::size_t c = hd * dh; c < (hd + 1) * dh; ++c) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += s[j] / z * v[j][c];
        att[i][c] = acc;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < h; ++c) {
      double acc = p.bo()(c);
      for (std::size_t r = 0; r < h; ++r) acc += att[i][r] * W(p.wo(), r, c);
      res[i][c] = acc + e[i][c];
    }
    for (std::size_t c = 0; c < h; ++c) {
      double acc = p.bf()(c);
      for (std::size_t r = 0; r < h; ++r) acc += res[i][r] * W(p.wf(), r, c);
      ff[i][c] = acc;
    }
    double mean = 0.0;
    for (double x : ff[i]) mean += x;
    mean /= static_cast<double>(h);
    double var = 0.0;
    for (double x : ff[i]) var += (x - mean) * (x - mean);
    var /= static_cast<double>(h);
    for (std::size_t c = 0; c < h; ++c) {
      out[i][c] = (ff[i][c] - mean) / std::sqrt(var + 1e-5) * p.ln_gain()(c) + p.ln_bias()(c);
    }
  }
  return out;
}

TEST(Contextualize, SingleSentenceShapeAndTrivialAttention) {
  EncoderParams p = EncoderParams::initialize(8, 2, 1);
  std::mt19937_64 rng(1);
  MatrixXd e = testing::random_matrix(1, 8, rng);
  DocumentForward f = forward_document(e, p);
  EXPECT_EQ(f.cs.rows(), 1);
  EXPECT_EQ(f.cs.cols(), 8);
  for (const MatrixXd& a : f.attention) EXPECT_EQ(a(0, 0), 1.0);
  EXPECT_EQ(f.alpha(0), 1.0);
  EXPECT_TRUE(f.cd.isApprox(f.cs.row(0).transpose()));
}

TEST(Contextualize, MatchesScalarForwardOracle) {
  EncoderParams p = tiny_params(4, 2);
  MatrixXd e(3, 4);
  e << 0.5, -1.0, 0.25, 2.0,
       1.5, 0.0, -0.5, 0.75,
       -0.25, 1.0, 1.25, -1.5;
  Grid expected = manual_contextualize(to_grid(e), p);
  MatrixXd cs = contextualize(e, p);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t c = 0; c < 4; ++c) {
      EXPECT_NEAR(cs(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)), expected[i][c], 1e-12);
    }
  }
}

TEST(Contextualize, MatchesOracleOnRandomShapes) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    std::mt19937_64 rng(seed);
    EncoderParams p = EncoderParams::initialize(8, seed % 2 == 0 ? 2 : 4, seed);
    p.bq().setConstant(0.05);
    p.bv().setConstant(-0.02);
    MatrixXd e = testing::random_matrix(static_cast<Eigen::Index>(2 + seed), 8, rng);
    Grid expected = manual_contextualize(to_grid(e), p);
    MatrixXd cs = contextualize(e, p);
    for (Eigen::Index i = 0; i < e.rows(); ++i) {
      for (Eigen::Index c = 0; c < 8; ++c) EXPECT_NEAR(cs(i, c), expected[i][c], 1e-12);
    }
  }
}

TEST(Contextualize, PermutationEquivariant) {
  EncoderParams p = EncoderParams::initialize(16, 2, 3);
  std::mt19937_64 rng(4);
  MatrixXd e = testing::random_matrix(5, 16, rng);
  std::vector<int> perm = {3, 0, 4, 1, 2};
  MatrixXd ep(5, 16);
  for (int i = 0; i < 5; ++i) ep.row(i) = e.row(perm[i]);
  MatrixXd cs = contextualize(e, p);
  MatrixXd csp = contextualize(ep, p);
  for (int i = 0; i < 5; ++i) {
    EXPECT_LT((csp.row(i) - cs.row(perm[i])).norm(), 1e-12);
  }
}

TEST(Contextualize, RejectsDimMismatchAndEmptyInput) {
  EncoderParams p = EncoderParams::initialize(8, 2, 1);
  EXPECT_THROW(contextualize(MatrixXd::Zero(2, 6), p), DataError);
  EXPECT_THROW(contextualize(MatrixXd::Zero(0, 8), p), DataError);
}

TEST(AttentivePool, ZeroScoresGiveUniformWeights) {
  EncoderParams p = EncoderParams::initialize(8, 2, 1);
  p.wa().setZero();
  p.ba().setZero();
  std::mt19937_64 rng(2);
  MatrixXd cs = testing::random_matrix(4, 8, rng);
  PooledDocument out = attentive_pool(cs, p);
  for (int k = 0; k < 4; ++k) EXPECT_DOUBLE_EQ(out.alpha(k), 0.25);
  EXPECT_LT((out.cd - cs.colwise().mean().transpose()).norm(), 1e-12);
}

TEST(AttentivePool, SingleRowIsItself) {
  EncoderParams p = EncoderParams::initialize(8, 2, 1);
  MatrixXd cs = MatrixXd::Constant(1, 8, 0.3);
  PooledDocument out = attentive_pool(cs, p);
  EXPECT_EQ(out.alpha(0), 1.0);
  EXPECT_EQ(out.cd, cs.row(0).transpose());
}

TEST(AttentivePool, HandSoftmaxThreeToOne) {
  EncoderParams p(4, 2, 1);
  p.wa()(0, 0) = 1.0;
  p.va()(0) = std::log(3.0) / std::tanh(0.5);
  MatrixXd cs(2, 4);
  cs << 0.5, 1.0, 2.0, 3.0,
        0.0, -1.0, 4.0, 1.0;
  PooledDocument out = attentive_pool(cs, p);
  EXPECT_NEAR(out.alpha(0), 0.75, 1e-12);
  EXPECT_NEAR(out.alpha(1), 0.25, 1e-12);
  VectorXd expected = 0.75 * cs.row(0).transpose() + 0.25 * cs.row(1).transpose();
  EXPECT_LT((out.cd - expected).norm(), 1e-12);
}

TEST(AttentivePool, AlphaIsAlwaysAProbabilityVector) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(seed);
    EncoderParams p = EncoderParams::initialize(16, 2, seed);
    MatrixXd e = testing::random_matrix(static_cast<Eigen::Index>(1 + seed % 7), 16, rng, 3.0);
    DocumentForward f = forward_document(e, p);
    EXPECT_NEAR(f.alpha.sum(), 1.0, 1e-9);
    EXPECT_TRUE((f.alpha.array() > 0.0).all());
  }
}

TEST(BackwardDocument, MatchesFiniteDifferencesOfLinearReadout) {
  EncoderParams p = EncoderParams::initialize(8, 2, 5);
  p.bq().setConstant(0.1);
  p.ba().setConstant(-0.05);
  std::mt19937_64 rng(6);
  MatrixXd e = testing::random_matrix(4, 8, rng);
  VectorXd w = testing::random_matrix(8, 1, rng);
  auto f = [&](const EncoderParams& q) { return w.dot(forward_document(e, q).cd); };
  EncoderParams grad = p.zeros_like();
  backward_document(forward_document(e, p), w, p, grad);
  const double h = 1e-5;
  for (std::size_t i = 0; i < p.size(); ++i) {
    EncoderParams plus = p, minus = p;
    plus.values()(static_cast<Eigen::Index>(i)) += h;
    minus.values()(static_cast<Eigen::Index>(i)) -= h;
    const double fd = (f(plus) - f(minus)) / (2 * h);
    const double an = grad.values()(static_cast<Eigen::Index>(i));
    EXPECT_NEAR(an, fd, 1e-7 + 1e-5 * std::abs(fd)) << "index " << i << " in " << p.block_of(i);
  }
}

TEST(EncoderParams, InitializationIsSeededAndF32Representable) {
  EncoderParams a = EncoderParams::initialize(16, 2, 7);
  EXPECT_EQ(a, EncoderParams::initialize(16, 2, 7));
  EXPECT_FALSE(a == EncoderParams::initialize(16, 2, 8));
  const double bound = 1.0 / 4.0;
  for (Eigen::Index i = 0; i < a.wq().size(); ++i) EXPECT_LE(std::abs(a.wq().data()[i]), bound);
  EXPECT_TRUE((a.ln_gain().array() == 1.0).all());
  EXPECT_TRUE((a.ln_bias().array() == 0.0).all());
  for (Eigen::Index i = 0; i < a.values().size(); ++i) {
    EXPECT_EQ(a.values()(i), static_cast<double>(static_cast<float>(a.values()(i))));
  }
  EXPECT_THROW(EncoderParams(10, 3), UsageError);
}

TEST(Checkpoint, RoundTripIsBitExact) {
  EncoderParams p = EncoderParams::initialize(16, 2, 9, 8);
  const std::string bytes = serialize_checkpoint(p);
  EXPECT_EQ(bytes.substr(0, 4), "PDS1");
  EXPECT_EQ(bytes.size(), 4 + 4 * 4 + 8 + 4 * p.size());
  EncoderParams back = parse_checkpoint(bytes);
  EXPECT_EQ(back, p);
  EXPECT_EQ(back.attn_dim(), 8u);
  auto dir = testing::scratch_dir("ckpt");
  save_checkpoint(p, dir / "p.pds");
  EXPECT_EQ(load_checkpoint(dir / "p.pds"), p);
}

TEST(Checkpoint, CorruptionIsRejected) {
  std::string bytes = serialize_checkpoint(EncoderParams::initialize(8, 2, 1));
  std::string bad_magic = bytes;
  bad_magic[0] = 'X';
  EXPECT_THROW(parse_checkpoint(bad_magic), DataError);
  EXPECT_THROW(parse_checkpoint(bytes.substr(0, bytes.size() - 2)), DataError);
  EXPECT_THROW(parse_checkpoint(bytes + "x"), DataError);
  std::string bad_version = bytes;
  bad_version[4] = 9;
  EXPECT_THROW(parse_checkpoint(bad_version), DataError);
}

}  // namespace
}  // namespace pdsum
