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

#include "mddl/classify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mddl/error.hpp"

namespace mddl {

namespace {

// First index of the maximum; ties resolve to the lowest index.
std::size_t first_argmax(const Vector& v) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return static_cast<std::size_t>(best);
}

}  // namespace

ClassificationResult classify(const Vector& x, const WeightingMatrix* m, std::size_t n,
                              std::size_t s, WeightingMode mode, ClassScore score) {
  if (n == 0 || s == 0) throw DimensionError("classify needs n, s > 0");
  const std::size_t expected = mode == WeightingMode::softmax ? n : n * s;
  if (static_cast<std::size_t>(x.size()) != expected) {
    throw DimensionError("code has length " + std::to_string(x.size()) + ", expected " +
                         std::to_string(expected) + " for weighting mode " + to_string(mode));
  }
  if (m && (m->n() != n || m->s() != s)) {
    throw DimensionError("weighting matrix shape does not match n and s");
  }

  ClassificationResult out;
  out.score_per_class.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (mode == WeightingMode::softmax) {
      out.score_per_class[k] = x[static_cast<Eigen::Index>(k)];
      continue;
    }
    const auto seg = x.segment(static_cast<Eigen::Index>(k * s), static_cast<Eigen::Index>(s));
    out.score_per_class[k] =
        score == ClassScore::max_component ? seg.maxCoeff() : seg.cwiseAbs().sum();
  }

  out.ranking.resize(n);
  std::iota(out.ranking.begin(), out.ranking.end(), std::size_t{0});
  std::stable_sort(out.ranking.begin(), out.ranking.end(), [&](std::size_t a, std::size_t b) {
    return out.score_per_class[a] > out.score_per_class[b];
  });
  out.class_id = out.ranking.front();
  out.degenerate = (x.array() == 0.0).all();

  if (mode == WeightingMode::softmax) {
    if (m) out.inferred_domain = first_argmax(m->block(out.class_id));
  } else {
    Vector seg = x.segment(static_cast<Eigen::Index>(out.class_id * s), static_cast<Eigen::Index>(s));
    if (score == ClassScore::sum_abs) seg = seg.cwiseAbs();
    out.inferred_domain = first_argmax(seg);
  }
  return out;
}

double top_k_recall(const std::vector<ClassificationResult>& results,
                    const std::vector<std::size_t>& truth, std::size_t k) {
  if (results.size() != truth.size()) {
    throw DimensionError("results and truth have different lengths");
  }
  if (k < 1) throw InvalidArgument("k must be at least 1");
  if (results.empty()) throw InvalidArgument("top-k recall of an empty result set");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& ranking = results[i].ranking;
    const auto end = ranking.begin() + static_cast<std::ptrdiff_t>(std::min(k, ranking.size()));
    if (std::find(ranking.begin(), end, truth[i]) != end) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(results.size());
}

double accuracy(const std::vector<ClassificationResult>& results,
                const std::vector<std::size_t>& truth) {
  if (results.size() != truth.size()) {
    throw DimensionError("results and truth have different lengths");
  }
  if (results.empty()) throw InvalidArgument("accuracy of an empty result set");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < results.size(); ++i) hits += results[i].class_id == truth[i];
  return static_cast<double>(hits) / static_cast<double>(results.size());
}

}  // namespace mddl
