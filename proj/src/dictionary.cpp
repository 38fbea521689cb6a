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

#include "mddl/dictionary.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mddl/error.hpp"
#include "mddl/matrix_io.hpp"

namespace mddl {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kUnitNormTolerance = 1e-9;
constexpr int kManifestVersion = 1;

void require_distinct(const std::vector<std::string>& labels, const char* what) {
  std::set<std::string> seen;
  for (const auto& label : labels) {
    if (!seen.insert(label).second) {
      throw InvalidArgument(std::string("duplicate ") + what + " label '" + label + "'");
    }
  }
}

}  // namespace

Dictionary::Dictionary(Matrix data, std::size_t n, std::size_t s,
                       std::vector<std::string> class_labels,
                       std::vector<std::string> domain_labels, bool normalized)
    : data_(std::move(data)),
      n_(n),
      s_(s),
      class_labels_(std::move(class_labels)),
      domain_labels_(std::move(domain_labels)),
      normalized_(normalized) {
  if (n_ == 0 || s_ == 0 || data_.rows() == 0) {
    throw DimensionError("dictionary requires d, n and s to be positive");
  }
  if (static_cast<std::size_t>(data_.cols()) != n_ * s_) {
    throw DimensionError("dictionary has " + std::to_string(data_.cols()) +
                         " columns, expected n * s = " + std::to_string(n_ * s_));
  }
  if (class_labels_.size() != n_) {
    throw DimensionError("expected " + std::to_string(n_) + " class labels, got " +
                         std::to_string(class_labels_.size()));
  }
  if (domain_labels_.size() != s_) {
    throw DimensionError("expected " + std::to_string(s_) + " domain labels, got " +
                         std::to_string(domain_labels_.size()));
  }
  require_distinct(class_labels_, "class");
  require_distinct(domain_labels_, "domain");
  if (!data_.allFinite()) throw InvalidArgument("dictionary contains non-finite values");
  if (normalized_) {
    for (Eigen::Index j = 0; j < data_.cols(); ++j) {
      if (std::abs(data_.col(j).norm() - 1.0) > kUnitNormTolerance) {
        throw InvalidArgument("dictionary flagged normalized but atom " + std::to_string(j) +
                              " does not have unit norm");
      }
    }
  }
}

Eigen::Ref<const Vector> Dictionary::atom(std::size_t cls, std::size_t domain) const {
  if (cls >= n_ || domain >= s_) throw DimensionError("atom index out of range");
  return data_.col(static_cast<Eigen::Index>(flat_index(cls, domain)));
}

Eigen::Ref<const Matrix> Dictionary::class_block(std::size_t cls) const {
  if (cls >= n_) throw DimensionError("class index out of range");
  return data_.middleCols(static_cast<Eigen::Index>(cls * s_), static_cast<Eigen::Index>(s_));
}

Dictionary Dictionary::domain(std::size_t domain) const {
  if (domain >= s_) throw DimensionError("domain index out of range");
  Matrix out(data_.rows(), static_cast<Eigen::Index>(n_));
  for (std::size_t k = 0; k < n_; ++k) {
    out.col(static_cast<Eigen::Index>(k)) = atom(k, domain);
  }
  return Dictionary(std::move(out), n_, 1, class_labels_, {domain_labels_[domain]}, normalized_);
}

Dictionary load_dictionary(const fs::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw IoError("cannot open dictionary manifest " + manifest.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw IoError("corrupt dictionary manifest " + manifest.string() + ": " + e.what());
  }

  std::size_t d = 0, n = 0, s = 0;
  std::vector<std::string> class_labels, domain_labels;
  bool normalized = false;
  std::vector<std::pair<std::string, std::string>> files;
  try {
    if (j.value("version", 0) != kManifestVersion) {
      throw IoError("unsupported dictionary manifest version in " + manifest.string());
    }
    d = j.at("d").get<std::size_t>();
    n = j.at("n").get<std::size_t>();
    s = j.at("s").get<std::size_t>();
    class_labels = j.at("class_labels").get<std::vector<std::string>>();
    domain_labels = j.at("domain_labels").get<std::vector<std::string>>();
    normalized = j.value("normalized", false);
    const auto& df = j.at("data_files");
    if (df.is_object()) {
      for (const auto& [label, file] : df.items()) files.emplace_back(label, file.get<std::string>());
    } else {
      for (const auto& entry : df) {
        files.emplace_back(entry.at("domain").get<std::string>(), entry.at("file").get<std::string>());
      }
    }
  } catch (const json::exception& e) {
    throw IoError("malformed dictionary manifest " + manifest.string() + ": " + e.what());
  }

  if (d == 0 || n == 0 || s == 0) throw DimensionError("manifest declares a zero dimension");
  if (domain_labels.size() != s || class_labels.size() != n) {
    throw DimensionError("manifest label counts do not match n and s");
  }
  require_distinct(class_labels, "class");
  require_distinct(domain_labels, "domain");

  Matrix data(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(n * s));
  std::vector<bool> filled(s, false);
  const fs::path base = manifest.parent_path();
  for (const auto& [label, file] : files) {
    auto it = std::find(domain_labels.begin(), domain_labels.end(), label);
    if (it == domain_labels.end()) {
      throw InvalidArgument("data file for undeclared domain '" + label + "'");
    }
    const auto l = static_cast<std::size_t>(it - domain_labels.begin());
    if (filled[l]) throw InvalidArgument("duplicate data file for domain '" + label + "'");
    filled[l] = true;
    const Matrix m = read_matrix_file(base / file);
    if (static_cast<std::size_t>(m.rows()) != d || static_cast<std::size_t>(m.cols()) != n) {
      throw DimensionError("domain '" + label + "' file is " + std::to_string(m.rows()) + "x" +
                           std::to_string(m.cols()) + ", expected " + std::to_string(d) + "x" +
                           std::to_string(n));
    }
    for (std::size_t k = 0; k < n; ++k) {
      data.col(static_cast<Eigen::Index>(k * s + l)) = m.col(static_cast<Eigen::Index>(k));
    }
  }
  for (std::size_t l = 0; l < s; ++l) {
    if (!filled[l]) throw IoError("no data file for domain '" + domain_labels[l] + "'");
  }
  return Dictionary(std::move(data), n, s, std::move(class_labels), std::move(domain_labels),
                    normalized);
}

void save_dictionary(const Dictionary& dict, const fs::path& manifest) {
  json files = json::object();
  const std::string stem = manifest.stem().string();
  for (std::size_t l = 0; l < dict.s(); ++l) {
    const std::string name = stem + "." + std::to_string(l) + ".mddl";
    write_matrix_file(dict.domain(l).data(), manifest.parent_path() / name);
    files[dict.domain_labels()[l]] = name;
  }
  json j = {{"version", kManifestVersion},
            {"d", dict.d()},
            {"n", dict.n()},
            {"s", dict.s()},
            {"class_labels", dict.class_labels()},
            {"domain_labels", dict.domain_labels()},
            {"normalized", dict.normalized()},
            {"data_files", files}};
  std::ofstream out(manifest);
  if (!out) throw IoError("cannot write dictionary manifest " + manifest.string());
  out << j.dump(2) << '\n';
  if (!out) throw IoError("failed writing " + manifest.string());
}

Dictionary load_csv_dictionary(const fs::path& csv, const std::string& domain_label) {
  std::ifstream in(csv);
  if (!in) throw IoError("cannot open " + csv.string());
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      const auto b = cell.find_first_not_of(" \t\r");
      const auto e = cell.find_last_not_of(" \t\r");
      cells.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
    }
    return cells;
  };
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty CSV file " + csv.string());
  const auto labels = split(line);
  if (labels.empty()) throw IoError("CSV header has no class labels");
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split(line);
    if (cells.size() != labels.size()) {
      throw DimensionError("CSV row " + std::to_string(rows.size() + 2) + " has " +
                           std::to_string(cells.size()) + " cells, expected " +
                           std::to_string(labels.size()));
    }
    std::vector<double> row;
    for (const auto& c : cells) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(c, &used));
        if (used != c.size()) throw std::invalid_argument(c);
      } catch (const std::exception&) {
        throw IoError("non-numeric CSV cell '" + c + "'");
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DimensionError("CSV file has no feature rows");
  Matrix data(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(labels.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t k = 0; k < labels.size(); ++k) {
      data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
    }
  }
  return Dictionary(std::move(data), labels.size(), 1, labels, {domain_label});
}

Dictionary normalize_atoms(const Dictionary& dict) {
  Matrix data = dict.data();
  for (std::size_t k = 0; k < dict.n(); ++k) {
    for (std::size_t l = 0; l < dict.s(); ++l) {
      auto col = data.col(static_cast<Eigen::Index>(dict.flat_index(k, l)));
      const double norm = col.norm();
      if (norm == 0.0) {
        throw InvalidArgument("cannot normalize zero atom (class " + std::to_string(k) + " '" +
                              dict.class_labels()[k] + "', domain " + std::to_string(l) + " '" +
                              dict.domain_labels()[l] + "')");
      }
      col /= norm;
    }
  }
  return Dictionary(std::move(data), dict.n(), dict.s(), dict.class_labels(),
                    dict.domain_labels(), true);
}

Dictionary assemble_miscellaneous(const Dictionary& source,
                                  const std::vector<Dictionary>& transferred) {
  if (source.s() != 1) throw InvalidArgument("source dictionary must have s = 1");
  std::vector<std::string> domain_labels = source.domain_labels();
  for (const auto& t : transferred) {
    if (t.s() != 1) throw InvalidArgument("transferred dictionaries must have s = 1");
    if (t.d() != source.d() || t.n() != source.n()) {
      throw DimensionError("transferred dictionary '" + t.domain_labels()[0] +
                           "' does not match the source d and n");
    }
    if (t.class_labels() != source.class_labels()) {
      throw InvalidArgument("transferred dictionary '" + t.domain_labels()[0] +
                            "' has different class labels or class order");
    }
    domain_labels.push_back(t.domain_labels()[0]);
  }
  require_distinct(domain_labels, "domain");

  const std::size_t s = 1 + transferred.size();
  const std::size_t n = source.n();
  Matrix data(static_cast<Eigen::Index>(source.d()), static_cast<Eigen::Index>(n * s));
  bool normalized = source.normalized();
  for (std::size_t k = 0; k < n; ++k) {
    data.col(static_cast<Eigen::Index>(k * s)) = source.data().col(static_cast<Eigen::Index>(k));
    for (std::size_t l = 1; l < s; ++l) {
      data.col(static_cast<Eigen::Index>(k * s + l)) =
          transferred[l - 1].data().col(static_cast<Eigen::Index>(k));
    }
  }
  for (const auto& t : transferred) normalized = normalized && t.normalized();
  return Dictionary(std::move(data), n, s, source.class_labels(), std::move(domain_labels),
                    normalized);
}

}  // namespace mddl
