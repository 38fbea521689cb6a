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
#include <optional>
#include <vector>

#include "mddl/solver.hpp"
#include "mddl/weighting.hpp"

namespace mddl {

/// How an unweighted (length n s) code is reduced to one score per class.
enum class ClassScore { max_component, sum_abs };

struct ClassificationResult {
  std::size_t class_id = 0;
  std::optional<std::size_t> inferred_domain;
  std::vector<std::size_t> ranking;  // class indices, best first
  std::vector<double> score_per_class;
  bool degenerate = false;           // x was identically zero
};

ClassificationResult classify(const Vector& x, const WeightingMatrix* m, std::size_t n,
                              std::size_t s, WeightingMode mode,
                              ClassScore score = ClassScore::max_component);

/// Fraction of samples whose true class is among the first k of the ranking.
double top_k_recall(const std::vector<ClassificationResult>& results,
                    const std::vector<std::size_t>& truth, std::size_t k);

double accuracy(const std::vector<ClassificationResult>& results,
                const std::vector<std::size_t>& truth);

}  // namespace mddl
