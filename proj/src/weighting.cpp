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

#include "mddl/weighting.hpp"

#include <cmath>

#include "mddl/error.hpp"

namespace mddl {

namespace {
constexpr double kBlockSumTolerance = 1e-9;
}

WeightingMatrix::WeightingMatrix(Matrix blocks) : blocks_(std::move(blocks)) {
  if (blocks_.rows() == 0 || blocks_.cols() == 0) {
    throw DimensionError("weighting matrix needs n, s > 0");
  }
  for (Eigen::Index k = 0; k < blocks_.rows(); ++k) {
    const auto row = blocks_.row(k);
    if (!row.allFinite() || row.minCoeff() < 0.0 || row.maxCoeff() > 1.0) {
      throw InvalidArgument("weighting block " + std::to_string(k) + " has entries outside [0, 1]");
    }
    if (std::abs(row.sum() - 1.0) > kBlockSumTolerance) {
      throw InvalidArgument("weighting block " + std::to_string(k) + " does not sum to 1");
    }
  }
}

Eigen::Ref<const Vector> WeightingMatrix::block(std::size_t cls) const {
  if (cls >= n()) throw DimensionError("weighting block index out of range");
  return blocks_.row(static_cast<Eigen::Index>(cls)).transpose();
}

Matrix WeightingMatrix::dense() const {
  const auto nn = static_cast<Eigen::Index>(n());
  const auto ss = static_cast<Eigen::Index>(s());
  Matrix m = Matrix::Zero(nn * ss, nn);
  for (Eigen::Index k = 0; k < nn; ++k) m.block(k * ss, k, ss, 1) = blocks_.row(k).transpose();
  return m;
}

CorrelationProfile correlations(const Dictionary& dict, const Vector& q) {
  if (static_cast<std::size_t>(q.size()) != dict.d()) {
    throw DimensionError("query has length " + std::to_string(q.size()) + ", dictionary d = " +
                         std::to_string(dict.d()));
  }
  // A^T q over all atoms, then reshaped so row k holds C_k. Column-major
  // (s x n) of the flat class-major vector is exactly the transposed profile.
  const Vector flat = dict.data().transpose() * q;
  const auto n = static_cast<Eigen::Index>(dict.n());
  const auto s = static_cast<Eigen::Index>(dict.s());
  return {Eigen::Map<const Matrix>(flat.data(), s, n).transpose()};
}

Vector softmax_block(const Vector& c) {
  if (c.size() == 0) throw DimensionError("softmax of an empty vector");
  if (!c.allFinite()) throw InvalidArgument("softmax input has non-finite entries");
  const Vector e = (c.array() - c.maxCoeff()).exp().matrix();
  return e / e.sum();
}

WeightingMatrix build_weighting(const Dictionary& dict, const Vector& q) {
  const CorrelationProfile profile = correlations(dict, q);
  Matrix blocks(profile.per_class.rows(), profile.per_class.cols());
  for (Eigen::Index k = 0; k < blocks.rows(); ++k) {
    blocks.row(k) = softmax_block(profile.per_class.row(k).transpose()).transpose();
  }
  return WeightingMatrix(std::move(blocks));
}

Matrix weighted_dictionary(const Dictionary& dict, const WeightingMatrix& m) {
  if (m.n() != dict.n() || m.s() != dict.s()) {
    throw DimensionError("weighting matrix shape does not match the dictionary");
  }
  Matrix out(static_cast<Eigen::Index>(dict.d()), static_cast<Eigen::Index>(dict.n()));
  for (std::size_t k = 0; k < dict.n(); ++k) {
    out.col(static_cast<Eigen::Index>(k)).noalias() = dict.class_block(k) * m.block(k);
  }
  return out;
}

}  // namespace mddl
