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

#include <cstring>

#include <gtest/gtest.h>

#include "mddl/domains.hpp"
#include "mddl/error.hpp"
#include "mddl/rng.hpp"
#include "test_util.hpp"

using namespace mddl;

namespace {

Dictionary grid_source(std::uint64_t seed, std::size_t n = 4) {
  Rng rng(seed);
  Matrix m(24, static_cast<Eigen::Index>(n));  // 4 x 6 grid
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform();
  return Dictionary(m, n, 1, mddl::testing::labels("c", n), {"source"});
}

DomainTransform make(TransformKind kind, const std::string& label) {
  DomainTransform t;
  t.kind = kind;
  t.label = label;
  t.geometry = GridShape{4, 6};
  return t;
}

}  // namespace

TEST(Rng, MatchesStandardMersenneTwisterSequence) {
  // The C++ standard fixes the 10000th output of a default-seeded mt19937_64.
  Rng rng(5489u);
  std::uint64_t v = 0;
  for (int i = 0; i < 10000; ++i) v = rng.next();
  EXPECT_EQ(v, 9981545732273789042ULL);
}

TEST(Rng, UniformAndNormalRanges) {
  Rng rng(1);
  double sum = 0, sq = 0;
  for (int i = 0; i < 20000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const double z = rng.normal();
    sum += z;
    sq += z * z;
  }
  EXPECT_NEAR(sum / 20000, 0.0, 0.03);
  EXPECT_NEAR(sq / 20000, 1.0, 0.05);
}

TEST(Domains, IdentityParametersAreExact) {
  const Dictionary src = grid_source(1);
  auto illum = make(TransformKind::illumination, "illum");
  auto noise = make(TransformKind::additive_noise, "noise");
  auto blur = make(TransformKind::blur, "blur");
  auto contrast = make(TransformKind::contrast, "contrast");
  for (const auto& t : {illum, noise, blur, contrast}) {
    const Dictionary out = apply_transform(t, src);
    EXPECT_EQ(0, std::memcmp(out.data().data(), src.data().data(),
                             sizeof(double) * static_cast<std::size_t>(src.data().size())))
        << t.label;
    EXPECT_EQ(out.domain_labels(), std::vector<std::string>{t.label});
  }
}

TEST(Domains, FullOcclusionZeroesEveryAtom) {
  auto t = make(TransformKind::occlusion, "mask");
  t.occlusion = {0, 0, 4, 6, 0.0};
  const Dictionary out = apply_transform(t, grid_source(2));
  EXPECT_TRUE(out.data().isZero(0.0));
}

TEST(Domains, OcclusionIsIdempotentAndLocal) {
  auto t = make(TransformKind::occlusion, "mask");
  t.occlusion = {1, 2, 2, 3, 0.7};
  const Dictionary src = grid_source(3);
  const Dictionary once = apply_transform(t, src);
  const Dictionary twice = apply_transform(t, once);
  EXPECT_EQ(once.data(), twice.data());
  // (row 0, col 0) lies outside the rectangle; (row 1, col 2) inside.
  EXPECT_EQ(once.data()(0, 0), src.data()(0, 0));
  EXPECT_EQ(once.data()(1 * 6 + 2, 0), 0.7);
}

TEST(Domains, NoiseIsDeterministicPerSeed) {
  auto t = make(TransformKind::additive_noise, "noise");
  t.noise.sigma = 0.3;
  t.seed = 77;
  const Dictionary src = grid_source(4);
  const Dictionary a = apply_transform(t, src);
  const Dictionary b = apply_transform(t, src);
  EXPECT_EQ(0, std::memcmp(a.data().data(), b.data().data(),
                           sizeof(double) * static_cast<std::size_t>(a.data().size())));
  EXPECT_NE(a.data(), src.data());
  // Classes draw from distinct streams.
  EXPECT_NE(Vector(a.data().col(0) - src.data().col(0)), Vector(a.data().col(1) - src.data().col(1)));
  t.seed = 78;
  EXPECT_NE(apply_transform(t, src).data(), a.data());
}

TEST(Domains, BlurKeepsConstantImagesAndSmooths) {
  auto t = make(TransformKind::blur, "blur");
  t.blur.width = 3;
  const Dictionary flat(Matrix::Constant(24, 2, 0.5), 2, 1, {"a", "b"}, {"s"});
  EXPECT_LE((apply_transform(t, flat).data().array() - 0.5).abs().maxCoeff(), 1e-15);

  Matrix spike = Matrix::Zero(24, 1);
  spike(1 * 6 + 2, 0) = 9.0;  // interior pixel
  const Dictionary out = apply_transform(t, Dictionary(spike, 1, 1, {"a"}, {"s"}));
  EXPECT_NEAR(out.data()(1 * 6 + 2, 0), 1.0, 1e-15);
  EXPECT_NEAR(out.data().sum(), 9.0, 1e-12);
}

TEST(Domains, ContrastAndIllumination) {
  auto c = make(TransformKind::contrast, "inv");
  c.contrast.scale = -1.0;
  Vector v(4);
  v << 1, 2, 3, 6;
  const Vector inv = apply_to_vector(c, v, 0);
  EXPECT_NEAR(inv.mean(), v.mean(), 1e-15);
  EXPECT_NEAR(inv[0], 2 * 3 - 1, 1e-15);

  auto i = make(TransformKind::illumination, "dark");
  i.illumination = {0.5, -1.0};
  EXPECT_EQ(apply_to_vector(i, v, 0), Vector((0.5 * v.array() - 1.0).matrix()));
}

TEST(Domains, PreservesShapeAndClassOrder) {
  const Dictionary src = grid_source(5, 6);
  for (auto kind : {TransformKind::illumination, TransformKind::occlusion,
                    TransformKind::additive_noise, TransformKind::blur, TransformKind::contrast}) {
    auto t = make(kind, to_string(kind));
    t.occlusion = {0, 0, 2, 2, 0.0};
    t.noise.sigma = 0.1;
    t.blur.width = 3;
    t.contrast.scale = 2.0;
    const Dictionary out = apply_transform(t, src);
    EXPECT_EQ(out.d(), src.d());
    EXPECT_EQ(out.n(), src.n());
    EXPECT_EQ(out.s(), 1u);
    EXPECT_EQ(out.class_labels(), src.class_labels());
  }
}

TEST(Domains, ValidationErrors) {
  const Dictionary src = grid_source(6);
  auto geo = make(TransformKind::blur, "g");
  geo.geometry = GridShape{5, 5};
  EXPECT_THROW(apply_transform(geo, src), DimensionError);

  auto occ = make(TransformKind::occlusion, "o");
  occ.occlusion = {3, 0, 2, 1, 0.0};
  EXPECT_THROW(apply_transform(occ, src), InvalidArgument);

  auto even = make(TransformKind::blur, "b");
  even.blur.width = 4;
  EXPECT_THROW(apply_transform(even, src), InvalidArgument);

  auto dark = make(TransformKind::illumination, "i");
  dark.illumination.gain = 0.0;
  EXPECT_THROW(apply_transform(dark, src), InvalidArgument);

  auto noisy = make(TransformKind::additive_noise, "n");
  noisy.noise.sigma = -1.0;
  EXPECT_THROW(apply_transform(noisy, src), InvalidArgument);

  const Dictionary two_domains(Matrix::Ones(24, 4), 2, 2, {"a", "b"}, {"x", "y"});
  EXPECT_THROW(apply_transform(make(TransformKind::blur, "b"), two_domains), InvalidArgument);
}

TEST(Domains, SuiteOfTwelveGivesThirteenSamplesPerClass) {
  std::vector<DomainTransform> spec;
  for (int i = 0; i < 12; ++i) {
    auto t = make(static_cast<TransformKind>(i % 5), "style" + std::to_string(i));
    t.occlusion = {0, 0, 1, 1, 0.0};
    t.blur.width = 3;
    t.noise.sigma = 0.05;
    t.seed = static_cast<std::uint64_t>(i);
    spec.push_back(t);
  }
  const auto suite = build_transform_suite(spec);
  ASSERT_EQ(suite.size(), 12u);
  const Dictionary misc = generate_miscellaneous(grid_source(7), suite);
  EXPECT_EQ(misc.s(), 13u);
  EXPECT_EQ(misc.domain_labels()[0], "source");
  EXPECT_EQ(misc.domain_labels()[12], "style11");

  EXPECT_TRUE(build_transform_suite({}).empty());
  EXPECT_EQ(generate_miscellaneous(grid_source(7), {}).s(), 1u);

  spec[3].label = spec[0].label;
  EXPECT_THROW(build_transform_suite(spec), InvalidArgument);
}

TEST(Domains, JsonRoundTripAndDefaultGeometry) {
  auto t = make(TransformKind::occlusion, "scarf");
  t.occlusion = {1, 1, 2, 3, 0.25};
  t.seed = 99;
  const DomainTransform back = transform_from_json(transform_to_json(t));
  EXPECT_EQ(back.kind, t.kind);
  EXPECT_EQ(back.label, t.label);
  EXPECT_EQ(back.seed, t.seed);
  EXPECT_EQ(back.occlusion.width, 3u);
  EXPECT_EQ(back.occlusion.fill, 0.25);
  ASSERT_TRUE(back.geometry.has_value());
  EXPECT_EQ(back.geometry->width, 6u);

  EXPECT_THROW(transform_from_json({{"kind", "sepia"}, {"label", "x"}}), InvalidArgument);
  EXPECT_EQ(default_geometry(256).height, 16u);
  EXPECT_EQ(default_geometry(24).height, 4u);
  EXPECT_EQ(default_geometry(7).height, 1u);
}
