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
#include <vector>

#include "mddl/dictionary.hpp"

namespace mddl {

// Binary matrix file: "MDDL" magic, then u32 LE format version, rows, cols,
// followed by rows * cols little-endian IEEE-754 doubles in column-major order.
inline constexpr std::uint32_t kMatrixFormatVersion = 1;
inline constexpr std::size_t kMatrixHeaderBytes = 16;

void write_matrix_file(const Matrix& m, const std::filesystem::path& path);
Matrix read_matrix_file(const std::filesystem::path& path);

/// Reads a query vector from either a binary matrix file with one column or
/// a text file of numbers separated by commas, spaces or newlines.
Vector read_vector_file(const std::filesystem::path& path);

/// A set of labeled query vectors.
struct TestSet {
  Matrix queries;                   // d x count, one query per column
  std::vector<std::size_t> classes; // true class per query
  std::vector<std::size_t> domains; // true domain per query (may be empty)
};

/// JSON manifest {version, d, count, data_file, class_ids, domain_ids}.
TestSet load_test_set(const std::filesystem::path& manifest);
void save_test_set(const TestSet& set, const std::filesystem::path& manifest);

}  // namespace mddl
