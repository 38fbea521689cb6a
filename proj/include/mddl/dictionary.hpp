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
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mddl {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Labeled dictionary of atoms indexed by (class, domain).
///
/// Columns are stored class-major, domain-minor: the atom of class k in
/// domain l lives at column k * s + l, so the class block A_k is the
/// contiguous column range [k * s, (k + 1) * s). Domain 0 is the source
/// domain. Instances are immutable once constructed.
class Dictionary {
 public:
  /// Validates shapes and labels. When `normalized` is true every column
  /// must already have unit L2 norm (within 1e-9).
  Dictionary(Matrix data, std::size_t n, std::size_t s,
             std::vector<std::string> class_labels,
             std::vector<std::string> domain_labels, bool normalized = false);

  std::size_t d() const noexcept { return static_cast<std::size_t>(data_.rows()); }
  std::size_t n() const noexcept { return n_; }
  std::size_t s() const noexcept { return s_; }
  std::size_t atom_count() const noexcept { return n_ * s_; }
  bool normalized() const noexcept { return normalized_; }

  const Matrix& data() const noexcept { return data_; }
  const std::vector<std::string>& class_labels() const noexcept { return class_labels_; }
  const std::vector<std::string>& domain_labels() const noexcept { return domain_labels_; }

  std::size_t flat_index(std::size_t cls, std::size_t domain) const noexcept {
    return cls * s_ + domain;
  }

  Eigen::Ref<const Vector> atom(std::size_t cls, std::size_t domain) const;

  /// The d x s sub-dictionary A_k.
  Eigen::Ref<const Matrix> class_block(std::size_t cls) const;

  /// Extracts domain `domain` as an s = 1 dictionary over the same classes.
  Dictionary domain(std::size_t domain) const;

 private:
  Matrix data_;
  std::size_t n_;
  std::size_t s_;
  std::vector<std::string> class_labels_;
  std::vector<std::string> domain_labels_;
  bool normalized_;
};

/// Reads a JSON manifest plus its per-domain binary matrix files.
Dictionary load_dictionary(const std::filesystem::path& manifest);

/// Writes `<stem>.json` and one `<stem>.<domain index>.mddl` file per domain
/// next to it. Payloads round-trip bit-exactly through load_dictionary.
void save_dictionary(const Dictionary& dict, const std::filesystem::path& manifest);

/// Imports a small s = 1 dictionary from CSV: a header row of class labels,
/// then one row per feature.
Dictionary load_csv_dictionary(const std::filesystem::path& csv,
                               const std::string& domain_label = "source");

/// Scales every atom to unit L2 norm. Throws InvalidArgument naming the
/// (class, domain) of the first zero atom.
Dictionary normalize_atoms(const Dictionary& dict);

/// Builds the miscellaneous dictionary A_M = [A_1, ..., A_n] from a source
/// dictionary and a list of style-transferred dictionaries, all with s = 1.
Dictionary assemble_miscellaneous(const Dictionary& source,
                                  const std::vector<Dictionary>& transferred);

}  // namespace mddl
