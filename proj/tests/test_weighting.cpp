// Copyright 2026 The MDDL Authors
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

#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "mddl/error.hpp"
#include "mddl/weighting.hpp"
#include "test_util.hpp"

using namespace mddl;
using mddl::testing::random_dictionary;
using mddl::testing::random_vector;

namespace {

// Direct loop over atoms; does not share the reshaping used by the library.
Matrix naive_correlations(const Dictionary& dict, const Vector& q) {
  Matrix c(dict.n(), dict.s());
  for (std::size_t k = 0; k < dict.n(); ++k) {
    for (std::size_t l = 0; l < dict.s(); ++l) {
      double acc = 0;
      for (std::size_t i = 0; i < dict.d(); ++i) acc += dict.atom(k, l)[i] * q[i];
      c(k, l) = acc;
    }
  }
  return c;
}

Vector naive_softmax(const Vector& c) {
  Vector e(c.size());
  double total = 0;
  for (Eigen::Index i = 0; i < c.size(); ++i) total += (e[i] = std::exp(c[i]));
  return e / total;
}

}  // namespace

TEST(Correlations, MatchLoopOracle) {
  Rng rng(11);
  const Dictionary dict = random_dictionary(rng, 17, 5, 4);
  const Vector q = random_vector(rng, 17);
  const Matrix c = correlations(dict, q).per_class;
  EXPECT_LE((c - naive_correlations(dict, q)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Correlations, OrthonormalAtomsGiveCoordinates) {
  const Matrix eye = Matrix::Identity(6, 6);
  const Dictionary dict(eye, 3, 2, {"a", "b", "c"}, {"x", "y"}, true);
  Vector q(6);
  q << 1, 2, 3, 4, 5, 6;
  const Matrix c = correlations(dict, q).per_class;
  EXPECT_EQ(c(0, 0), 1);
  EXPECT_EQ(c(0, 1), 2);
  EXPECT_EQ(c(2, 1), 6);
}

TEST(Correlations, ZeroQueryGivesUniformWeights) {
  Rng rng(12);
  const Dictionary dict = random_dictionary(rng, 8, 3, 4);
  const Vector q = Vector::Zero(8);
  EXPECT_TRUE(correlations(dict, q).per_class.isZero(0.0));
  const WeightingMatrix m = build_weighting(dict, q);
  EXPECT_LE((m.blocks().array() - 0.25).abs().maxCoeff(), 1e-15);
}

TEST(Softmax, KnownValues) {
  Vector c(3);
  c << 0, 0, 0;
  EXPECT_LE((softmax_block(c).array() - 1.0 / 3).abs().maxCoeff(), 1e-15);

  Vector two(2);
  two << std::log(2.0), 0.0;
  EXPECT_NEAR(softmax_block(two)[0], 2.0 / 3, 1e-15);
  EXPECT_NEAR(softmax_block(two)[1], 1.0 / 3, 1e-15);

  Vector big(2);
  big << 1000, 0;
  const Vector w = softmax_block(big);
  EXPECT_TRUE(w.allFinite());
  EXPECT_NEAR(w[0], 1.0, 1e-15);
  EXPECT_GE(w[1], 0.0);
  EXPECT_LT(w[1], 1e-300);

  Vector bad(2);
  bad << 1.0, std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(softmax_block(bad), InvalidArgument);
  bad << 1.0, std::numeric_limits<double>::infinity();
  EXPECT_THROW(softmax_block(bad), InvalidArgument);
}

TEST(Softmax, ShiftInvariantAndMatchesDirectFormula) {
  Rng rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const Vector c = random_vector(rng, 7);
    const Vector w = softmax_block(c);
    EXPECT_NEAR(w.sum(), 1.0, 1e-12);
    EXPECT_LE((w - naive_softmax(c)).cwiseAbs().maxCoeff(), 1e-12);
    const Vector shifted = softmax_block((c.array() + 3.7).matrix());
    EXPECT_LE((w - shifted).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Weighting, BlocksAreStochastic) {
  Rng rng(14);
  const Dictionary dict = random_dictionary(rng, 20, 6, 5);
  const WeightingMatrix m = build_weighting(dict, random_vector(rng, 20));
  ASSERT_EQ(m.n(), 6u);
  ASSERT_EQ(m.s(), 5u);
  for (std::size_t k = 0; k < m.n(); ++k) {
    EXPECT_NEAR(m.block(k).sum(), 1.0, 1e-12);
    EXPECT_GE(m.block(k).minCoeff(), 0.0);
    EXPECT_LE(m.block(k).maxCoeff(), 1.0);
  }
  const Matrix dense = m.dense();
  EXPECT_EQ(dense.rows(), 30);
  EXPECT_EQ(dense.cols(), 6);
  EXPECT_LE((dense.colwise().sum().array() - 1.0).abs().maxCoeff(), 1e-12);
  // Block-diagonal: column k is supported on rows k s .. k s + s - 1.
  EXPECT_EQ(dense.block(0, 1, 5, 1).norm(), 0.0);
}

TEST(Weighting, SingleDomainIsIdentity) {
  Rng rng(15);
  const Dictionary dict = random_dictionary(rng, 9, 4, 1);
  const WeightingMatrix m = build_weighting(dict, random_vector(rng, 9));
  EXPECT_TRUE(m.blocks().isOnes(0.0));
  EXPECT_EQ(weighted_dictionary(dict, m), dict.data());
}

TEST(Weighting, OrthogonalQueryGivesUniformBlock) {
  // Class 0 atoms live in coordinates 0..1; the query lives in coordinate 2.
  Matrix a = Matrix::Zero(3, 4);
  a(0, 0) = 1;
  a(1, 1) = 1;
  a(2, 2) = 1;
  a(2, 3) = 2;
  const Dictionary dict(a, 2, 2, {"a", "b"}, {"x", "y"});
  const Vector q = Vector::Unit(3, 2);
  const WeightingMatrix m = build_weighting(dict, q);
  EXPECT_EQ(m.block(0)[0], 0.5);
  EXPECT_EQ(m.block(0)[1], 0.5);
  EXPECT_GT(m.block(1)[1], m.block(1)[0]);
}

TEST(Weighting, ArgmaxFollowsLargestCorrelation) {
  Rng rng(16);
  Dictionary raw = random_dictionary(rng, 30, 4, 5);
  const Dictionary dict = normalize_atoms(raw);
  for (std::size_t k = 0; k < dict.n(); ++k) {
    for (std::size_t l = 0; l < dict.s(); ++l) {
      const Vector q = dict.atom(k, l);
      const WeightingMatrix m = build_weighting(dict, q);
      // Enumerate correlations to find the expected argmax.
      std::size_t best = 0;
      double best_c = -1e300;
      for (std::size_t j = 0; j < dict.s(); ++j) {
        const double c = dict.atom(k, j).dot(q);
        if (c > best_c) best_c = c, best = j;
      }
      Eigen::Index got;
      m.block(k).maxCoeff(&got);
      EXPECT_EQ(static_cast<std::size_t>(got), best);
      EXPECT_EQ(best, l);  // unit atoms: self-correlation 1 dominates
    }
  }
}

TEST(WeightedDictionary, MatchesDenseProduct) {
  Rng rng(17);
  const Dictionary dict = random_dictionary(rng, 25, 7, 3);
  const WeightingMatrix m = build_weighting(dict, random_vector(rng, 25));
  const Matrix fast = weighted_dictionary(dict, m);
  const Matrix dense = dict.data() * m.dense();
  ASSERT_EQ(fast.rows(), 25);
  ASSERT_EQ(fast.cols(), 7);
  EXPECT_LE((fast - dense).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(WeightedDictionary, UniformAndOneHotBlocks) {
  Rng rng(18);
  const Dictionary dict = random_dictionary(rng, 10, 3, 4);
  const WeightingMatrix uniform(Matrix::Constant(3, 4, 0.25));
  const Matrix mean = weighted_dictionary(dict, uniform);
  for (std::size_t k = 0; k < 3; ++k) {
    const Vector expected = dict.class_block(k).rowwise().mean();
    EXPECT_LE((mean.col(static_cast<Eigen::Index>(k)) - expected).cwiseAbs().maxCoeff(), 1e-12);
  }

  Matrix onehot = Matrix::Zero(3, 4);
  onehot(0, 2) = onehot(1, 0) = onehot(2, 3) = 1;
  const Matrix pick = weighted_dictionary(dict, WeightingMatrix(onehot));
  EXPECT_EQ(Vector(pick.col(0)), dict.atom(0, 2));
  EXPECT_EQ(Vector(pick.col(1)), dict.atom(1, 0));
  EXPECT_EQ(Vector(pick.col(2)), dict.atom(2, 3));
}

TEST(WeightedDictionary, ColumnsStayInsideAtomHull) {
  Rng rng(19);
  const Dictionary dict = random_dictionary(rng, 12, 5, 3);
  const Matrix w = weighted_dictionary(dict, build_weighting(dict, random_vector(rng, 12)));
  for (std::size_t k = 0; k < 5; ++k) {
    const Matrix block = dict.class_block(k);
    for (Eigen::Index i = 0; i < 12; ++i) {
      EXPECT_GE(w(i, static_cast<Eigen::Index>(k)), block.row(i).minCoeff() - 1e-12);
      EXPECT_LE(w(i, static_cast<Eigen::Index>(k)), block.row(i).maxCoeff() + 1e-12);
    }
  }
}

TEST(WeightingMatrix, RejectsInvalidBlocks) {
  Matrix m(1, 2);
  m << 0.7, 0.7;
  EXPECT_THROW(WeightingMatrix{m}, InvalidArgument);
  m << 1.2, -0.2;
  EXPECT_THROW(WeightingMatrix{m}, InvalidArgument);
  Rng rng(20);
  const Dictionary dict = random_dictionary(rng, 5, 2, 2);
  EXPECT_THROW(correlations(dict, Vector::Zero(4)), DimensionError);
  EXPECT_THROW(weighted_dictionary(dict, WeightingMatrix(Matrix::Constant(3, 2, 0.5))),
               DimensionError);
}
