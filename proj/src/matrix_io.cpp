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

#include "mddl/matrix_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mddl/error.hpp"

namespace mddl {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::array<char, 4> kMagic{'M', 'D', 'D', 'L'};

template <typename T>
T to_little_endian(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
    std::reverse(bytes.begin(), bytes.end());
    return std::bit_cast<T>(bytes);
  } else {
    return v;
  }
}

void put_u32(std::ostream& out, std::uint32_t v) {
  v = to_little_endian(v);
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t get_u32(std::istream& in) {
  std::uint32_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  return to_little_endian(v);
}

}  // namespace

void write_matrix_file(const Matrix& m, const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(kMagic.data(), kMagic.size());
  put_u32(out, kMatrixFormatVersion);
  put_u32(out, static_cast<std::uint32_t>(m.rows()));
  put_u32(out, static_cast<std::uint32_t>(m.cols()));
  // Eigen's default storage is column-major, matching the file layout.
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(m.data()),
              static_cast<std::streamsize>(m.size() * sizeof(double)));
  } else {
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      const double v = to_little_endian(m.data()[i]);
      out.write(reinterpret_cast<const char*>(&v), sizeof v);
    }
  }
  if (!out) throw IoError("failed writing " + path.string());
}

Matrix read_matrix_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open matrix file " + path.string());
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw IoError("bad magic in matrix file " + path.string());
  const std::uint32_t version = get_u32(in);
  const std::uint32_t rows = get_u32(in);
  const std::uint32_t cols = get_u32(in);
  if (!in) throw IoError("truncated header in " + path.string());
  if (version != kMatrixFormatVersion) {
    throw IoError("unsupported matrix format version " + std::to_string(version) + " in " +
                  path.string());
  }
  const auto expected = static_cast<std::uintmax_t>(kMatrixHeaderBytes) +
                        static_cast<std::uintmax_t>(rows) * cols * sizeof(double);
  std::error_code ec;
  const auto size = fs::file_size(path, ec);
  if (ec || size != expected) {
    throw IoError("matrix file " + path.string() + " has " + std::to_string(size) +
                  " bytes, expected " + std::to_string(expected));
  }
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  in.read(reinterpret_cast<char*>(m.data()), static_cast<std::streamsize>(m.size() * sizeof(double)));
  if (!in) throw IoError("truncated payload in " + path.string());
  if constexpr (std::endian::native == std::endian::big) {
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = to_little_endian(m.data()[i]);
  }
  return m;
}

Vector read_vector_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open vector file " + path.string());
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (in && magic == kMagic) {
    in.close();
    const Matrix m = read_matrix_file(path);
    if (m.cols() != 1) throw DimensionError("vector file " + path.string() + " has more than one column");
    return m.col(0);
  }
  in.clear();
  in.seekg(0);
  std::stringstream text;
  text << in.rdbuf();
  std::string content = text.str();
  for (char& c : content) {
    if (c == ',' || c == ';') c = ' ';
  }
  std::istringstream values(content);
  std::vector<double> out;
  std::string token;
  while (values >> token) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(token, &used));
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw IoError("non-numeric value '" + token + "' in " + path.string());
    }
  }
  if (out.empty()) throw IoError("vector file " + path.string() + " is empty");
  return Eigen::Map<const Vector>(out.data(), static_cast<Eigen::Index>(out.size()));
}

TestSet load_test_set(const fs::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw IoError("cannot open test-set manifest " + manifest.string());
  TestSet set;
  try {
    json j;
    in >> j;
    set.queries = read_matrix_file(manifest.parent_path() / j.at("data_file").get<std::string>());
    set.classes = j.at("class_ids").get<std::vector<std::size_t>>();
    if (j.contains("domain_ids")) set.domains = j.at("domain_ids").get<std::vector<std::size_t>>();
    if (j.contains("d") && j.at("d").get<std::size_t>() != static_cast<std::size_t>(set.queries.rows())) {
      throw DimensionError("test-set manifest d does not match its data file");
    }
  } catch (const json::exception& e) {
    throw IoError("malformed test-set manifest " + manifest.string() + ": " + e.what());
  }
  if (set.classes.size() != static_cast<std::size_t>(set.queries.cols()) ||
      (!set.domains.empty() && set.domains.size() != set.classes.size())) {
    throw DimensionError("test-set label count does not match the number of queries");
  }
  return set;
}

void save_test_set(const TestSet& set, const fs::path& manifest) {
  const std::string data_name = manifest.stem().string() + ".queries.mddl";
  write_matrix_file(set.queries, manifest.parent_path() / data_name);
  json j = {{"version", 1},
            {"d", set.queries.rows()},
            {"count", set.queries.cols()},
            {"data_file", data_name},
            {"class_ids", set.classes}};
  if (!set.domains.empty()) j["domain_ids"] = set.domains;
  std::ofstream out(manifest);
  if (!out) throw IoError("cannot write test-set manifest " + manifest.string());
  out << j.dump(2) << '\n';
  if (!out) throw IoError("failed writing " + manifest.string());
}

}  // namespace mddl
