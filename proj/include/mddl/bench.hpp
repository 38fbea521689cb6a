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
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "mddl/classify.hpp"
#include "mddl/solver.hpp"
#include "mddl/synthetic.hpp"

namespace mddl {

/// Which dictionary a benchmark configuration solves against.
enum class DictionaryChoice {
  source,         // A_S: domain 0 only
  miscellaneous,  // A_M: every domain
};

struct BenchConfig {
  std::string name;
  DictionaryChoice dictionary = DictionaryChoice::miscellaneous;
  SolverConfig solver;
  ClassScore score = ClassScore::max_component;
};

struct FileDataset {
  std::filesystem::path dictionary;
  std::filesystem::path test_set;
};

struct SweepSpec {
  std::size_t d = 256;
  std::size_t n = 26;
  std::vector<std::size_t> s_values{1, 4, 16};
  std::size_t repeats = 20;
  std::uint64_t seed = 0;
  SolverConfig solver;

  void validate() const;
};

/// Checks evaluated against a finished report; any failure makes the CLI
/// exit nonzero.
struct BenchAssertions {
  std::vector<std::string> accuracy_order;  // nondecreasing accuracy
  struct Gap {
    std::string lower, higher;
    double min_gap = 0;
  };
  std::vector<Gap> min_gaps;
  struct Range {
    std::string name;
    double min = 0, max = 1;
  };
  std::vector<Range> accuracy_ranges;
  bool top5_at_least_accuracy = false;
  std::optional<double> min_domain_accuracy;  // applies to softmax rows
  std::optional<double> sweep_unweighted_ratio_min;
  std::optional<double> sweep_weighted_ratio_max;
};

struct ExperimentSpec {
  std::variant<SyntheticSpec, FileDataset> dataset = SyntheticSpec{};
  std::size_t test_count = 300;
  bool normalize = true;
  std::vector<BenchConfig> configs;
  std::filesystem::path output_path;  // empty: no files written
  std::optional<SweepSpec> sweep;
  BenchAssertions assertions;

  void validate() const;
};

struct BenchRow {
  std::string name;
  double accuracy = 0;
  double top5_recall = 0;
  double mean_solve_time_s = 0;
  double median_solve_time_s = 0;
  double iterations_mean = 0;
  double converged_fraction = 0;
  std::size_t failures = 0;  // non-finite solves, counted as misclassified
  std::optional<double> domain_accuracy;  // among correct predictions
};

struct ScalingRow {
  std::size_t s = 0;
  double t_weighted = 0;
  double t_unweighted = 0;
};

struct AssertionOutcome {
  std::string description;
  bool passed = false;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::vector<ScalingRow> sweep;
  std::vector<AssertionOutcome> assertions;
  std::string environment;
  std::string build;
  std::string timestamp;

  bool all_assertions_passed() const;
  const BenchRow& row(const std::string& name) const;
};

/// Runs every configuration over the test set. Timings cover the solver call
/// only (weighting construction and per-query factorizations included).
BenchReport run_experiment(const ExperimentSpec& spec);

/// Median per-query solve time of the weighted and unweighted paths for
/// each s in the sweep.
std::vector<ScalingRow> scaling_sweep(const SweepSpec& sweep);

void evaluate_assertions(const BenchAssertions& assertions, BenchReport& report);

ExperimentSpec experiment_from_json(const nlohmann::json& j,
                                    const std::filesystem::path& base_dir = {});
ExperimentSpec load_experiment_spec(const std::filesystem::path& path);
SolverConfig solver_config_from_json(const nlohmann::json& j, SolverConfig base = {});
nlohmann::json solver_config_to_json(const SolverConfig& cfg);

nlohmann::json report_to_json(const BenchReport& report);
std::string report_to_table(const BenchReport& report);
/// Writes `<path>` (JSON) and `<path>.txt` (aligned table); sweep rows also
/// go to `<path>.sweep.csv` when present.
void write_report(const BenchReport& report, const std::filesystem::path& path);

/// The default accuracy experiment: source-only, MDDL without M, MDDL with M.
std::vector<BenchConfig> default_bench_configs();

}  // namespace mddl
