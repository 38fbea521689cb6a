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
#include <fstream>

#include <gtest/gtest.h>

#include "mddl/bench.hpp"
#include "mddl/error.hpp"
#include "test_util.hpp"

using namespace mddl;

namespace {

SyntheticSpec small_spec(std::uint64_t seed = 3) {
  SyntheticSpec s;
  s.d = 64;
  s.n = 8;
  s.s = 3;
  s.seed = seed;
  s.test_count = 20;
  return s;
}

ExperimentSpec small_experiment(SyntheticSpec syn, std::size_t tests) {
  ExperimentSpec spec;
  spec.dataset = syn;
  spec.test_count = tests;
  spec.configs = default_bench_configs();
  return spec;
}

}  // namespace

TEST(Synthetic, DeterministicPerSeed) {
  const SyntheticDataset a = gen_synthetic(small_spec());
  const SyntheticDataset b = gen_synthetic(small_spec());
  ASSERT_EQ(a.dictionary.data().size(), b.dictionary.data().size());
  EXPECT_EQ(0, std::memcmp(a.dictionary.data().data(), b.dictionary.data().data(),
                           sizeof(double) * static_cast<std::size_t>(a.dictionary.data().size())));
  EXPECT_EQ(a.tests.queries, b.tests.queries);
  EXPECT_EQ(a.tests.classes, b.tests.classes);
  EXPECT_EQ(a.tests.domains, b.tests.domains);
  EXPECT_NE(gen_synthetic(small_spec(4)).tests.queries, a.tests.queries);
}

TEST(Synthetic, ShapesAndLabels) {
  const SyntheticDataset data = gen_synthetic(small_spec());
  EXPECT_EQ(data.dictionary.d(), 64u);
  EXPECT_EQ(data.dictionary.n(), 8u);
  EXPECT_EQ(data.dictionary.s(), 3u);
  EXPECT_EQ(data.transforms.size(), 2u);
  EXPECT_EQ(data.dictionary.domain_labels().front(), "source");
  EXPECT_EQ(data.tests.queries.rows(), 64);
  EXPECT_EQ(data.tests.queries.cols(), 20);
  for (std::size_t j = 0; j < 20; ++j) {
    EXPECT_LT(data.tests.classes[j], 8u);
    EXPECT_LT(data.tests.domains[j], 3u);
  }
  // Prototypes have the configured norm.
  EXPECT_NEAR(data.dictionary.atom(0, 0).norm(), 16.0, 1e-9);
}

TEST(Synthetic, NoiseFreeQueriesAreAtoms) {
  SyntheticSpec s = small_spec();
  s.separation = std::numeric_limits<double>::infinity();
  const SyntheticDataset data = gen_synthetic(s);
  for (std::size_t j = 0; j < 20; ++j) {
    EXPECT_EQ(Vector(data.tests.queries.col(static_cast<Eigen::Index>(j))),
              data.dictionary.atom(data.tests.classes[j], data.tests.domains[j]));
  }
}

TEST(Synthetic, RejectsBadSpec) {
  SyntheticSpec s = small_spec();
  s.n = 0;
  EXPECT_THROW(s.validate(), InvalidArgument);
  s = small_spec();
  s.separation = 0;
  EXPECT_THROW(s.validate(), InvalidArgument);
}

TEST(Bench, SingleClassIsAlwaysRight) {
  SyntheticSpec s = small_spec();
  s.n = 1;
  const BenchReport report = run_experiment(small_experiment(s, 10));
  for (const auto& row : report.rows) {
    EXPECT_EQ(row.accuracy, 1.0) << row.name;
    EXPECT_EQ(row.top5_recall, 1.0) << row.name;
  }
}

TEST(Bench, NoiseFreeQueriesClassifyPerfectly) {
  SyntheticSpec s = small_spec();
  s.separation = std::numeric_limits<double>::infinity();
  ExperimentSpec spec = small_experiment(s, 20);
  spec.configs.erase(spec.configs.begin());  // the source dictionary misses other domains
  for (auto& c : spec.configs) c.solver.lambda = 0.01;
  spec.assertions.min_domain_accuracy = 0.95;
  const BenchReport report = run_experiment(spec);
  for (const auto& row : report.rows) {
    EXPECT_EQ(row.accuracy, 1.0) << row.name;
    ASSERT_TRUE(row.domain_accuracy.has_value());
    EXPECT_EQ(*row.domain_accuracy, 1.0) << row.name;
  }
  EXPECT_TRUE(report.all_assertions_passed());
}

TEST(Bench, SingleQueryAndReportInvariants) {
  const BenchReport one = run_experiment(small_experiment(small_spec(), 1));
  for (const auto& row : one.rows) {
    EXPECT_TRUE(row.accuracy == 0.0 || row.accuracy == 1.0);
  }
  const BenchReport report = run_experiment(small_experiment(small_spec(), 20));
  ASSERT_EQ(report.rows.size(), 3u);
  for (const auto& row : report.rows) {
    EXPECT_GE(row.top5_recall, row.accuracy);
    EXPECT_GE(row.converged_fraction, 0.0);
    EXPECT_LE(row.converged_fraction, 1.0);
    EXPECT_GT(row.iterations_mean, 0.0);
    EXPECT_EQ(row.failures, 0u);
  }
  EXPECT_EQ(report.row("mddl_with_m").name, "mddl_with_m");
  EXPECT_THROW(report.row("missing"), InvalidArgument);
  EXPECT_FALSE(report.environment.empty());
  EXPECT_NE(report_to_table(report).find("mddl_without_m"), std::string::npos);
}

TEST(Bench, RejectsEmptyConfigsAndSweeps) {
  ExperimentSpec spec = small_experiment(small_spec(), 5);
  spec.configs.clear();
  EXPECT_THROW(run_experiment(spec), InvalidArgument);
  spec = small_experiment(small_spec(), 5);
  spec.configs.push_back(spec.configs.front());
  EXPECT_THROW(run_experiment(spec), InvalidArgument);

  SweepSpec sweep;
  sweep.repeats = 0;
  EXPECT_THROW(scaling_sweep(sweep), InvalidArgument);
  sweep.repeats = 1;
  sweep.s_values.clear();
  EXPECT_THROW(scaling_sweep(sweep), InvalidArgument);
}

TEST(Bench, SweepOverOneDomain) {
  SweepSpec sweep;
  sweep.d = 32;
  sweep.n = 4;
  sweep.s_values = {1};
  sweep.repeats = 2;
  const auto rows = scaling_sweep(sweep);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].s, 1u);
  EXPECT_GT(rows[0].t_weighted, 0.0);
  EXPECT_GT(rows[0].t_unweighted, 0.0);
}

TEST(Bench, AssertionEvaluation) {
  BenchReport report;
  report.rows.push_back({"a", 0.4, 0.6});
  report.rows.push_back({"b", 0.7, 0.65});
  report.sweep = {{1, 1.0, 1.0}, {16, 1.5, 9.0}};
  BenchAssertions a;
  a.accuracy_order = {"a", "b"};
  a.min_gaps = {{"a", "b", 0.25}};
  a.accuracy_ranges = {{"a", 0.25, 0.55}};
  a.top5_at_least_accuracy = true;
  a.sweep_unweighted_ratio_min = 5;
  a.sweep_weighted_ratio_max = 2;
  evaluate_assertions(a, report);
  ASSERT_EQ(report.assertions.size(), 6u);
  EXPECT_TRUE(report.assertions[0].passed);
  EXPECT_TRUE(report.assertions[1].passed);
  EXPECT_TRUE(report.assertions[2].passed);
  EXPECT_FALSE(report.assertions[3].passed);  // b: top-5 below accuracy
  EXPECT_TRUE(report.assertions[4].passed);
  EXPECT_TRUE(report.assertions[5].passed);
  EXPECT_FALSE(report.all_assertions_passed());
}

TEST(BenchJson, ParsesSpec) {
  const nlohmann::json j = nlohmann::json::parse(R"({
    "dataset": {"synthetic": {"d": 32, "n": 4, "s": 2, "separation": "inf", "seed": 5}},
    "test_count": 7,
    "normalize": false,
    "solver": {"lambda": 0.5, "tau0": 0.2},
    "configs": [
      {"name": "src", "dictionary": "source"},
      {"name": "soft", "weighting": "softmax", "class_score": "sum_abs", "max_iter": 50}
    ],
    "output": "out/report.json",
    "sweep": {"s_values": [1, 2], "repeats": 3},
    "assertions": {"accuracy_order": ["src", "soft"], "min_domain_accuracy": 0.9}
  })");
  const ExperimentSpec spec = experiment_from_json(j, "/base");
  const auto& syn = std::get<SyntheticSpec>(spec.dataset);
  EXPECT_EQ(syn.d, 32u);
  EXPECT_TRUE(std::isinf(syn.separation));
  EXPECT_EQ(spec.test_count, 7u);
  EXPECT_FALSE(spec.normalize);
  ASSERT_EQ(spec.configs.size(), 2u);
  EXPECT_EQ(spec.configs[0].dictionary, DictionaryChoice::source);
  EXPECT_EQ(spec.configs[0].solver.lambda, 0.5);
  EXPECT_EQ(spec.configs[1].solver.weighting, WeightingMode::softmax);
  EXPECT_EQ(spec.configs[1].solver.max_iter, 50);
  EXPECT_EQ(spec.configs[1].solver.tau0, 0.2);
  EXPECT_EQ(spec.configs[1].score, ClassScore::sum_abs);
  EXPECT_EQ(spec.output_path, std::filesystem::path("/base/out/report.json"));
  ASSERT_TRUE(spec.sweep.has_value());
  EXPECT_EQ(spec.sweep->repeats, 3u);
  EXPECT_EQ(spec.sweep->solver.lambda, 0.5);
  EXPECT_EQ(*spec.assertions.min_domain_accuracy, 0.9);

  const SolverConfig round = solver_config_from_json(solver_config_to_json(spec.configs[1].solver));
  EXPECT_EQ(round.max_iter, 50);
  EXPECT_EQ(round.weighting, WeightingMode::softmax);

  EXPECT_THROW(experiment_from_json(nlohmann::json::parse(R"({"dataset": {}})")), InvalidArgument);
}

TEST(BenchJson, FileDatasetAndReportFiles) {
  const auto dir = mddl::testing::scratch_dir("bench_files");
  SyntheticSpec syn = small_spec();
  syn.test_count = 6;
  const SyntheticDataset data = gen_synthetic(syn);
  save_dictionary(data.dictionary, dir / "dict.json");
  save_test_set(data.tests, dir / "tests.json");

  ExperimentSpec spec;
  spec.dataset = FileDataset{dir / "dict.json", dir / "tests.json"};
  spec.test_count = 6;
  spec.configs = default_bench_configs();
  spec.output_path = dir / "report.json";
  const BenchReport from_files = run_experiment(spec);
  EXPECT_TRUE(std::filesystem::exists(dir / "report.json"));
  EXPECT_TRUE(std::filesystem::exists(dir / "report.json.txt"));

  const BenchReport direct = run_experiment(small_experiment(syn, 6));
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(from_files.rows[i].accuracy, direct.rows[i].accuracy);
  }
  std::ifstream in(dir / "report.json");
  const auto j = nlohmann::json::parse(in);
  EXPECT_EQ(j.at("rows").size(), 3u);

  spec.test_count = 7;
  EXPECT_THROW(run_experiment(spec), InvalidArgument);
}
