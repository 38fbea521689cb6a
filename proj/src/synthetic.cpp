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

#include "mddl/synthetic.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "mddl/error.hpp"
#include "mddl/rng.hpp"

namespace mddl {

void SyntheticSpec::validate() const {
  if (d == 0 || n == 0 || s == 0) throw InvalidArgument("synthetic d, n and s must be positive");
  if (!(separation > 0.0)) throw InvalidArgument("separation must be positive");
  if (!(amplitude > 0.0) || !std::isfinite(amplitude)) {
    throw InvalidArgument("amplitude must be positive and finite");
  }
  if (test_count == 0) throw InvalidArgument("synthetic test_count must be positive");
}

namespace {

std::string indexed(const char* prefix, std::size_t i, int width) {
  std::ostringstream os;
  os << prefix << std::setw(width) << std::setfill('0') << i;
  return os.str();
}

std::size_t odd_at_most(std::size_t v) { return v % 2 == 1 ? v : (v == 0 ? 1 : v - 1); }

}  // namespace

std::vector<DomainTransform> default_domain_suite(std::size_t count, GridShape g,
                                                  std::uint64_t seed, double amplitude) {
  const std::size_t d = g.height * g.width;
  if (d == 0) throw InvalidArgument("domain suite needs a non-empty grid");
  // Typical entry magnitude of a unit-norm atom; keeps parameters scale-aware.
  const double unit = amplitude / std::sqrt(static_cast<double>(d));
  std::vector<DomainTransform> suite;
  suite.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t round = i / 5;
    const double r = static_cast<double>(round);
    DomainTransform t;
    t.seed = seed + 1000003ULL * (i + 1);
    t.geometry = g;
    switch (i % 5) {
      case 0:
        t.kind = TransformKind::illumination;
        t.illumination.gain = round % 2 == 0 ? 0.5 : 1.6;
        t.illumination.bias = (round % 2 == 0 ? -1.0 : 3.0) * unit * (1.0 + 0.5 * r);
        break;
      case 1: {
        t.kind = TransformKind::occlusion;
        auto& o = t.occlusion;
        o.height = std::max<std::size_t>(1, (g.height * 3) / 4);
        o.width = std::max<std::size_t>(1, (g.width * 3) / 4);
        o.row = (round % 2 == 0) ? g.height - o.height : 0;
        o.col = (round * 3) % (g.width - o.width + 1);
        o.fill = (round % 2 == 0) ? 3.0 * unit : 0.0;
        break;
      }
      case 2:
        t.kind = TransformKind::additive_noise;
        t.noise.sigma = unit * (6.0 + 1.0 * r);
        break;
      case 3:
        t.kind = TransformKind::blur;
        t.blur.width = odd_at_most(std::min({5 + 2 * round, g.height, g.width}));
        break;
      case 4:
        t.kind = TransformKind::contrast;
        t.contrast.scale = round % 2 == 0 ? -1.0 : 2.5;
        break;
    }
    t.label = to_string(t.kind) + "_" + std::to_string(round);
    suite.push_back(std::move(t));
  }
  return suite;
}

SyntheticDataset gen_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  const auto d = static_cast<Eigen::Index>(spec.d);
  const auto n = static_cast<Eigen::Index>(spec.n);
  const int width = spec.n > 1 ? static_cast<int>(std::to_string(spec.n - 1).size()) : 1;

  Rng proto_rng = Rng::stream(spec.seed, 1);
  Matrix prototypes(d, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index i = 0; i < d; ++i) prototypes(i, k) = proto_rng.uniform();
    prototypes.col(k) *= spec.amplitude / prototypes.col(k).norm();
  }
  std::vector<std::string> class_labels;
  for (std::size_t k = 0; k < spec.n; ++k) class_labels.push_back(indexed("class_", k, width));
  const Dictionary source(std::move(prototypes), spec.n, 1, class_labels, {"source"});

  auto transforms = default_domain_suite(spec.s - 1, default_geometry(spec.d), spec.seed, spec.amplitude);
  Dictionary misc = generate_miscellaneous(source, build_transform_suite(transforms));

  TestSet tests;
  tests.queries.resize(d, static_cast<Eigen::Index>(spec.test_count));
  const bool noise_free = std::isinf(spec.separation);
  const double sigma = noise_free ? 0.0 : spec.amplitude / (spec.separation * std::sqrt(static_cast<double>(spec.d)));
  Rng test_rng = Rng::stream(spec.seed, 2);
  for (std::size_t j = 0; j < spec.test_count; ++j) {
    const std::size_t k = test_rng.below(spec.n);
    const std::size_t l = test_rng.below(spec.s);
    auto col = tests.queries.col(static_cast<Eigen::Index>(j));
    col = misc.atom(k, l);
    if (!noise_free) {
      for (Eigen::Index i = 0; i < d; ++i) col[i] += sigma * test_rng.normal();
    }
    tests.classes.push_back(k);
    tests.domains.push_back(l);
  }
  return {std::move(misc), std::move(tests), std::move(transforms)};
}

}  // namespace mddl
