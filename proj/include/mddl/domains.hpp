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
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mddl/dictionary.hpp"

namespace mddl {

enum class TransformKind { illumination, occlusion, additive_noise, blur, contrast };

std::string to_string(TransformKind kind);
TransformKind transform_kind_from_string(const std::string& name);

struct GridShape {
  std::size_t height = 0;
  std::size_t width = 0;
};

struct IlluminationParams {
  double gain = 1.0;
  double bias = 0.0;
};

/// Axis-aligned rectangle on the image grid, filled with a constant.
struct OcclusionParams {
  std::size_t row = 0;
  std::size_t col = 0;
  std::size_t height = 0;
  std::size_t width = 0;
  double fill = 0.0;
};

struct NoiseParams {
  double sigma = 0.0;
};

/// Separable box blur with clamp-to-edge borders; width must be odd.
struct BlurParams {
  std::size_t width = 1;
};

/// Scales each atom about its own mean.
struct ContrastParams {
  double scale = 1.0;
};

/// A deterministic style transform standing in for a generator G_T.
struct DomainTransform {
  TransformKind kind = TransformKind::illumination;
  std::string label;
  std::uint64_t seed = 0;
  IlluminationParams illumination;
  OcclusionParams occlusion;
  NoiseParams noise;
  BlurParams blur;
  ContrastParams contrast;
  std::optional<GridShape> geometry;

  /// Throws InvalidArgument if the kind-specific parameters are out of range.
  void validate() const;
  /// Additionally checks the geometry against a feature dimension.
  void validate(std::size_t d) const;
};

/// Applies `t` to one atom. `stream` selects the noise stream (the class
/// index when called through apply_transform).
Vector apply_to_vector(const DomainTransform& t, const Vector& v, std::uint64_t stream);

/// A_T = G_T(A_S): maps an s = 1 dictionary to the style domain of `t`.
Dictionary apply_transform(const DomainTransform& t, const Dictionary& source);

using DomainGenerator = std::function<Dictionary(const Dictionary&)>;

/// One generator per transform, in order. Labels must be distinct.
std::vector<DomainGenerator> build_transform_suite(const std::vector<DomainTransform>& spec);

/// Runs every generator and assembles the miscellaneous dictionary.
Dictionary generate_miscellaneous(const Dictionary& source,
                                  const std::vector<DomainGenerator>& suite);

/// Largest divisor of d not exceeding sqrt(d) as height; used when a
/// transform needs a grid and none was given.
GridShape default_geometry(std::size_t d);

DomainTransform transform_from_json(const nlohmann::json& j);
nlohmann::json transform_to_json(const DomainTransform& t);
std::vector<DomainTransform> load_transform_suite(const std::filesystem::path& path);

}  // namespace mddl
