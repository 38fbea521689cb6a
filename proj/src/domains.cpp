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

#include "mddl/domains.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "mddl/error.hpp"
#include "mddl/rng.hpp"

namespace mddl {

namespace fs = std::filesystem;
using nlohmann::json;

std::string to_string(TransformKind kind) {
  switch (kind) {
    case TransformKind::illumination: return "illumination";
    case TransformKind::occlusion: return "occlusion";
    case TransformKind::additive_noise: return "additive_noise";
    case TransformKind::blur: return "blur";
    case TransformKind::contrast: return "contrast";
  }
  return "unknown";
}

TransformKind transform_kind_from_string(const std::string& name) {
  for (auto kind : {TransformKind::illumination, TransformKind::occlusion,
                    TransformKind::additive_noise, TransformKind::blur, TransformKind::contrast}) {
    if (to_string(kind) == name) return kind;
  }
  throw InvalidArgument("unknown transform kind '" + name + "'");
}

GridShape default_geometry(std::size_t d) {
  std::size_t h = static_cast<std::size_t>(std::sqrt(static_cast<double>(d)));
  while (h > 1 && d % h != 0) --h;
  if (h == 0) h = 1;
  return {h, d / h};
}

namespace {

GridShape grid_for(const DomainTransform& t, std::size_t d) {
  return t.geometry ? *t.geometry : default_geometry(d);
}

// One pass of a box filter along rows (horizontal) or columns, clamping
// indices at the border. Image is stored row-major in `v`.
Vector box_pass(const Vector& v, GridShape g, std::size_t width, bool horizontal) {
  const auto half = static_cast<std::ptrdiff_t>(width / 2);
  const auto h = static_cast<std::ptrdiff_t>(g.height);
  const auto w = static_cast<std::ptrdiff_t>(g.width);
  Vector out(v.size());
  for (std::ptrdiff_t r = 0; r < h; ++r) {
    for (std::ptrdiff_t c = 0; c < w; ++c) {
      double sum = 0.0;
      for (std::ptrdiff_t o = -half; o <= half; ++o) {
        const std::ptrdiff_t rr = horizontal ? r : std::clamp<std::ptrdiff_t>(r + o, 0, h - 1);
        const std::ptrdiff_t cc = horizontal ? std::clamp<std::ptrdiff_t>(c + o, 0, w - 1) : c;
        sum += v[rr * w + cc];
      }
      out[r * w + c] = sum / static_cast<double>(width);
    }
  }
  return out;
}

}  // namespace

void DomainTransform::validate() const {
  if (label.empty()) throw InvalidArgument("transform label must not be empty");
  switch (kind) {
    case TransformKind::illumination:
      if (!(illumination.gain > 0.0) || !std::isfinite(illumination.gain) ||
          !std::isfinite(illumination.bias)) {
        throw InvalidArgument("illumination gain must be positive and finite");
      }
      break;
    case TransformKind::occlusion:
      if (!std::isfinite(occlusion.fill)) throw InvalidArgument("occlusion fill must be finite");
      break;
    case TransformKind::additive_noise:
      if (!(noise.sigma >= 0.0) || !std::isfinite(noise.sigma)) {
        throw InvalidArgument("noise standard deviation must be >= 0");
      }
      break;
    case TransformKind::blur:
      if (blur.width < 1 || blur.width % 2 == 0) {
        throw InvalidArgument("blur kernel width must be odd and >= 1");
      }
      break;
    case TransformKind::contrast:
      if (!std::isfinite(contrast.scale)) throw InvalidArgument("contrast scale must be finite");
      break;
  }
}

void DomainTransform::validate(std::size_t d) const {
  validate();
  if (geometry && geometry->height * geometry->width != d) {
    throw DimensionError("transform '" + label + "' geometry " + std::to_string(geometry->height) +
                         "x" + std::to_string(geometry->width) + " does not match d = " +
                         std::to_string(d));
  }
  if (kind == TransformKind::occlusion) {
    const GridShape g = grid_for(*this, d);
    if (occlusion.row + occlusion.height > g.height || occlusion.col + occlusion.width > g.width) {
      throw InvalidArgument("occlusion rectangle of '" + label + "' leaves the " +
                            std::to_string(g.height) + "x" + std::to_string(g.width) + " grid");
    }
  }
}

Vector apply_to_vector(const DomainTransform& t, const Vector& v, std::uint64_t stream) {
  const auto d = static_cast<std::size_t>(v.size());
  switch (t.kind) {
    case TransformKind::illumination:
      return (t.illumination.gain * v.array() + t.illumination.bias).matrix();
    case TransformKind::occlusion: {
      const GridShape g = grid_for(t, d);
      Vector out = v;
      const auto& o = t.occlusion;
      for (std::size_t r = o.row; r < o.row + o.height; ++r) {
        for (std::size_t c = o.col; c < o.col + o.width; ++c) {
          out[static_cast<Eigen::Index>(r * g.width + c)] = o.fill;
        }
      }
      return out;
    }
    case TransformKind::additive_noise: {
      Rng rng = Rng::stream(t.seed, stream);
      Vector out = v;
      for (Eigen::Index i = 0; i < out.size(); ++i) out[i] += t.noise.sigma * rng.normal();
      return out;
    }
    case TransformKind::blur: {
      if (t.blur.width == 1) return v;
      const GridShape g = grid_for(t, d);
      return box_pass(box_pass(v, g, t.blur.width, true), g, t.blur.width, false);
    }
    case TransformKind::contrast: {
      if (t.contrast.scale == 1.0) return v;
      const double mean = v.mean();
      return ((v.array() - mean) * t.contrast.scale + mean).matrix();
    }
  }
  return v;
}

Dictionary apply_transform(const DomainTransform& t, const Dictionary& source) {
  if (source.s() != 1) throw InvalidArgument("apply_transform expects a dictionary with s = 1");
  t.validate(source.d());
  Matrix out(source.data().rows(), source.data().cols());
  for (std::size_t k = 0; k < source.n(); ++k) {
    const auto j = static_cast<Eigen::Index>(k);
    out.col(j) = apply_to_vector(t, source.data().col(j), k);
  }
  return Dictionary(std::move(out), source.n(), 1, source.class_labels(), {t.label});
}

std::vector<DomainGenerator> build_transform_suite(const std::vector<DomainTransform>& spec) {
  std::set<std::string> labels;
  std::vector<DomainGenerator> suite;
  suite.reserve(spec.size());
  for (const auto& t : spec) {
    t.validate();
    if (!labels.insert(t.label).second) {
      throw InvalidArgument("duplicate transform label '" + t.label + "'");
    }
    suite.emplace_back([t](const Dictionary& source) { return apply_transform(t, source); });
  }
  return suite;
}

Dictionary generate_miscellaneous(const Dictionary& source,
                                  const std::vector<DomainGenerator>& suite) {
  std::vector<Dictionary> transferred;
  transferred.reserve(suite.size());
  for (const auto& g : suite) transferred.push_back(g(source));
  return assemble_miscellaneous(source, transferred);
}

DomainTransform transform_from_json(const json& j) {
  DomainTransform t;
  try {
    t.kind = transform_kind_from_string(j.at("kind").get<std::string>());
    t.label = j.at("label").get<std::string>();
    t.seed = j.value("seed", std::uint64_t{0});
    const json p = j.value("params", json::object());
    switch (t.kind) {
      case TransformKind::illumination:
        t.illumination.gain = p.value("gain", 1.0);
        t.illumination.bias = p.value("bias", 0.0);
        break;
      case TransformKind::occlusion:
        t.occlusion.row = p.at("row").get<std::size_t>();
        t.occlusion.col = p.at("col").get<std::size_t>();
        t.occlusion.height = p.at("height").get<std::size_t>();
        t.occlusion.width = p.at("width").get<std::size_t>();
        t.occlusion.fill = p.value("fill", 0.0);
        break;
      case TransformKind::additive_noise:
        t.noise.sigma = p.at("sigma").get<double>();
        break;
      case TransformKind::blur:
        t.blur.width = p.at("width").get<std::size_t>();
        break;
      case TransformKind::contrast:
        t.contrast.scale = p.at("scale").get<double>();
        break;
    }
    if (j.contains("geometry") && !j.at("geometry").is_null()) {
      const auto& g = j.at("geometry");
      if (g.is_array()) {
        t.geometry = GridShape{g.at(0).get<std::size_t>(), g.at(1).get<std::size_t>()};
      } else {
        t.geometry = GridShape{g.at("height").get<std::size_t>(), g.at("width").get<std::size_t>()};
      }
    }
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed transform: ") + e.what());
  }
  t.validate();
  return t;
}

json transform_to_json(const DomainTransform& t) {
  json p;
  switch (t.kind) {
    case TransformKind::illumination:
      p = {{"gain", t.illumination.gain}, {"bias", t.illumination.bias}};
      break;
    case TransformKind::occlusion:
      p = {{"row", t.occlusion.row},       {"col", t.occlusion.col},
           {"height", t.occlusion.height}, {"width", t.occlusion.width},
           {"fill", t.occlusion.fill}};
      break;
    case TransformKind::additive_noise:
      p = {{"sigma", t.noise.sigma}};
      break;
    case TransformKind::blur:
      p = {{"width", t.blur.width}};
      break;
    case TransformKind::contrast:
      p = {{"scale", t.contrast.scale}};
      break;
  }
  json j = {{"kind", to_string(t.kind)}, {"label", t.label}, {"seed", t.seed}, {"params", p}};
  j["geometry"] = t.geometry ? json::array({t.geometry->height, t.geometry->width}) : json(nullptr);
  return j;
}

std::vector<DomainTransform> load_transform_suite(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open transform suite " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw IoError("corrupt transform suite " + path.string() + ": " + e.what());
  }
  if (!j.is_array()) throw IoError("transform suite must be a JSON array");
  std::vector<DomainTransform> out;
  for (const auto& entry : j) out.push_back(transform_from_json(entry));
  return out;
}

}  // namespace mddl
