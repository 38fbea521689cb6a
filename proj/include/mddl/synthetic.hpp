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

#include <cstdint>
#include <vector>

#include "mddl/dictionary.hpp"
#include "mddl/domains.hpp"
#include "mddl/matrix_io.hpp"

namespace mddl {

struct SyntheticSpec {
  std::size_t d = 256;
  std::size_t n = 50;
  std::size_t s = 6;
  /// Test noise standard deviation is 1 / separation; infinity gives
  /// noise-free queries equal to dictionary atoms.
  double separation = 2.0;
  /// L2 norm of every class prototype. Queries keep this scale, like raw
  /// intensity features, while dictionary atoms are normally unit-normalized.
  double amplitude = 16.0;
  std::uint64_t seed = 0;
  std::size_t test_count = 300;

  void validate() const;
};

struct SyntheticDataset {
  Dictionary dictionary;  // miscellaneous dictionary, un-normalized, s domains
  TestSet tests;          // queries with true class and domain
  std::vector<DomainTransform> transforms;
};

/// `count` style transforms cycling through the five kinds with
/// deterministic parameters. `amplitude` is the prototype norm the
/// parameters are scaled against.
std::vector<DomainTransform> default_domain_suite(std::size_t count, GridShape geometry,
                                                  std::uint64_t seed, double amplitude = 1.0);

/// Unit-norm non-negative class prototypes, s - 1 default style domains and
/// test queries T_l(p_k) + noise / separation with uniformly drawn (k, l).
SyntheticDataset gen_synthetic(const SyntheticSpec& spec);

}  // namespace mddl
