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

#pragma once

#include <cstddef>
#include <vector>

#include "mddl/dictionary.hpp"

namespace mddl {

/// Query-atom inner products, shape n x s: entry (k, l) = <atom(k, l), q>.
struct CorrelationProfile {
  Matrix per_class;  // row k is C_k
};

/// Block-diagonal weighting matrix M in [0,1]^{(n s) x n}.
///
/// Only the n blocks are stored; row k of `blocks` is M_k, which occupies
/// rows [k s, (k + 1) s) of column k in the logical matrix. Every block is on
/// the probability simplex.
class WeightingMatrix {
 public:
  /// Validates entries in [0, 1] and unit block sums (within 1e-9).
  explicit WeightingMatrix(Matrix blocks);

  std::size_t n() const noexcept { return static_cast<std::size_t>(blocks_.rows()); }
  std::size_t s() const noexcept { return static_cast<std::size_t>(blocks_.cols()); }
  const Matrix& blocks() const noexcept { return blocks_; }
  Eigen::Ref<const Vector> block(std::size_t cls) const;

  /// Dense (n s) x n materialization. For tests and diagnostics only.
  Matrix dense() const;

 private:
  Matrix blocks_;
};

CorrelationProfile correlations(const Dictionary& dict, const Vector& q);

/// Max-shifted softmax. Throws InvalidArgument on non-finite input.
Vector softmax_block(const Vector& c);

/// M_k = softmax(A_k^T q) for every class k.
WeightingMatrix build_weighting(const Dictionary& dict, const Vector& q);

/// A_M M without forming the dense M: column k = sum_l M_k[l] atom(k, l).
Matrix weighted_dictionary(const Dictionary& dict, const WeightingMatrix& m);

}  // namespace mddl
