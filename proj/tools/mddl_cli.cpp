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

// mddl: command-line front end for multi-domain dictionary classification.
//
//   mddl gen        write a synthetic dictionary and labeled test set
//   mddl transform  apply a style-transform suite to a source dictionary
//   mddl solve      solve one query and write the sparse code as JSON
//   mddl classify   classify a labeled test set, one JSON line per sample
//   mddl bench      run an experiment spec (accuracy table, scaling sweep)

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mddl/bench.hpp"
#include "mddl/classify.hpp"
#include "mddl/dictionary.hpp"
#include "mddl/domains.hpp"
#include "mddl/error.hpp"
#include "mddl/matrix_io.hpp"
#include "mddl/oracle.hpp"
#include "mddl/solver.hpp"
#include "mddl/synthetic.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct SolverOptions {
  mddl::SolverConfig cfg;
  std::string weighting = "softmax";
  std::string dual_update = "scaled";
  bool no_normalize = false;

  void add_to(CLI::App* app) {
    app->add_option("--lambda", cfg.lambda, "L1 penalty")->capture_default_str();
    app->add_option("--l2", cfg.l2_penalty, "Elastic-Net L2 penalty")->capture_default_str();
    app->add_option("--tau0", cfg.tau0, "initial tau (ADMM penalty is 1/tau)")->capture_default_str();
    app->add_option("--tau-growth", cfg.tau_growth, "per-iteration tau growth factor")
        ->capture_default_str();
    app->add_option("--tau-max", cfg.tau_max, "tau cap")->capture_default_str();
    app->add_option("--max-iter", cfg.max_iter, "iteration limit")->capture_default_str();
    app->add_option("--tol", cfg.tol, "convergence tolerance")->capture_default_str();
    app->add_option("--weighting", weighting, "none or softmax")
        ->check(CLI::IsMember({"none", "softmax"}))
        ->capture_default_str();
    app->add_option("--dual-update", dual_update, "scaled or paper")
        ->check(CLI::IsMember({"scaled", "paper"}))
        ->capture_default_str();
    app->add_flag("--no-normalize", no_normalize, "use atoms as stored, without unit-norm scaling");
  }

  mddl::SolverConfig resolved() const {
    mddl::SolverConfig c = cfg;
    c.weighting = mddl::weighting_mode_from_string(weighting);
    c.dual_update = mddl::dual_update_from_string(dual_update);
    c.validate();
    return c;
  }
};

mddl::Dictionary prepare(const fs::path& manifest, bool no_normalize) {
  mddl::Dictionary dict = mddl::load_dictionary(manifest);
  if (no_normalize || dict.normalized()) return dict;
  return mddl::normalize_atoms(dict);
}

void write_json(const json& j, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream f(out);
  if (!f) throw mddl::IoError("cannot write " + out);
  f << j.dump(2) << '\n';
}

json weighting_json(const mddl::WeightingMatrix& m) {
  json blocks = json::array();
  for (std::size_t k = 0; k < m.n(); ++k) {
    const auto b = m.block(k);
    blocks.push_back(std::vector<double>(b.data(), b.data() + b.size()));
  }
  return blocks;
}

std::vector<double> to_std(const mddl::Vector& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-domain dictionary learning: weighted sparse-coding classification"};
  app.require_subcommand(1);
  app.set_version_flag("--version", MDDL_VERSION);

  // gen
  auto* gen = app.add_subcommand("gen", "write a synthetic dictionary and labeled test set");
  mddl::SyntheticSpec syn;
  std::string gen_out;
  std::string gen_separation = "2";
  gen->add_option("--d", syn.d, "feature dimension")->capture_default_str();
  gen->add_option("--n", syn.n, "number of classes")->capture_default_str();
  gen->add_option("--s", syn.s, "samples per class (1 + style domains)")->capture_default_str();
  gen->add_option("--separation", gen_separation, "inverse test-noise level, or inf")
      ->capture_default_str();
  gen->add_option("--amplitude", syn.amplitude, "L2 norm of each class prototype")
      ->capture_default_str();
  gen->add_option("--seed", syn.seed, "random seed")->capture_default_str();
  gen->add_option("--test-count", syn.test_count, "number of test queries")->capture_default_str();
  gen->add_option("--out-dir", gen_out, "output directory")->required();

  // transform
  auto* transform = app.add_subcommand("transform", "apply a style-transform suite to a source dictionary");
  std::string tr_source, tr_suite, tr_out;
  bool tr_normalize = false;
  transform->add_option("--source", tr_source, "source dictionary manifest (s = 1)")->required();
  transform->add_option("--suite", tr_suite, "transform suite JSON")->required();
  transform->add_option("--out-dir", tr_out, "output directory")->required();
  transform->add_flag("--normalize", tr_normalize, "unit-normalize the assembled dictionary");

  // solve
  auto* solve = app.add_subcommand("solve", "solve one query against a dictionary");
  SolverOptions solve_opts;
  std::string solve_dict, solve_query_path, solve_out;
  bool solve_oracle = false;
  solve->add_option("--dict", solve_dict, "dictionary manifest")->required();
  solve->add_option("--query", solve_query_path, "query vector (binary matrix or text)")->required();
  solve->add_option("--out", solve_out, "output JSON (default: stdout)");
  solve->add_flag("--oracle", solve_oracle, "also report a coordinate-descent reference solution");
  solve_opts.add_to(solve);

  // classify
  auto* cls = app.add_subcommand("classify", "classify a labeled test set");
  SolverOptions cls_opts;
  std::string cls_dict, cls_queries, cls_out, cls_score = "max_component";
  cls->add_option("--dict", cls_dict, "dictionary manifest")->required();
  cls->add_option("--queries", cls_queries, "test-set manifest")->required();
  cls->add_option("--out", cls_out, "output JSON lines (default: stdout)");
  cls->add_option("--class-score", cls_score, "unweighted class score: max_component or sum_abs")
      ->check(CLI::IsMember({"max_component", "sum_abs"}))
      ->capture_default_str();
  cls_opts.add_to(cls);

  // bench
  auto* bench = app.add_subcommand("bench", "run an experiment spec");
  std::string bench_spec, bench_out;
  bool bench_sweep = false;
  bench->add_option("--spec", bench_spec, "experiment spec JSON")->required();
  bench->add_flag("--sweep", bench_sweep, "also run the runtime scaling sweep");
  bench->add_option("--out", bench_out, "report path (overrides the spec)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      syn.separation = gen_separation == "inf" ? std::numeric_limits<double>::infinity()
                                               : std::stod(gen_separation);
      const mddl::SyntheticDataset data = mddl::gen_synthetic(syn);
      fs::create_directories(gen_out);
      mddl::save_dictionary(data.dictionary, fs::path(gen_out) / "dictionary.json");
      mddl::save_dictionary(data.dictionary.domain(0), fs::path(gen_out) / "source.json");
      mddl::save_test_set(data.tests, fs::path(gen_out) / "tests.json");
      json suite = json::array();
      for (const auto& t : data.transforms) suite.push_back(mddl::transform_to_json(t));
      write_json(suite, (fs::path(gen_out) / "transforms.json").string());
      std::cout << "wrote d=" << syn.d << " n=" << syn.n << " s=" << syn.s << " with "
                << syn.test_count << " queries to " << gen_out << '\n';
    } else if (*transform) {
      const mddl::Dictionary source = mddl::load_dictionary(tr_source);
      const auto transforms = mddl::load_transform_suite(tr_suite);
      fs::create_directories(tr_out);
      std::vector<mddl::Dictionary> transferred;
      for (const auto& t : transforms) {
        transferred.push_back(mddl::apply_transform(t, source));
        mddl::save_dictionary(transferred.back(), fs::path(tr_out) / (t.label + ".json"));
      }
      mddl::Dictionary misc = mddl::assemble_miscellaneous(source, transferred);
      if (tr_normalize) misc = mddl::normalize_atoms(misc);
      mddl::save_dictionary(misc, fs::path(tr_out) / "miscellaneous.json");
      std::cout << "assembled s=" << misc.s() << " dictionary in " << tr_out << '\n';
    } else if (*solve) {
      const mddl::SolverConfig cfg = solve_opts.resolved();
      const mddl::Dictionary dict = prepare(solve_dict, solve_opts.no_normalize);
      const mddl::Vector q = mddl::read_vector_file(solve_query_path);
      const mddl::SolveResult r = mddl::solve_query(dict, q, cfg);
      json out = {{"x", to_std(r.x)},
                  {"converged", r.converged},
                  {"iterations", r.iterations},
                  {"recovery_error", r.recovery_error},
                  {"wall_time_s", r.wall_time_s}};
      if (r.weighting) out["weighting_blocks"] = weighting_json(*r.weighting);
      if (solve_oracle) {
        const mddl::Matrix effective =
            r.weighting ? mddl::weighted_dictionary(dict, *r.weighting) : dict.data();
        const mddl::Vector ref = mddl::oracle::lasso_cd(effective, q, cfg.lambda);
        out["oracle"] = {
            {"x", to_std(ref)},
            {"objective", mddl::lasso_objective(effective, q, cfg.lambda, ref)},
            {"solver_objective", mddl::lasso_objective(effective, q, cfg.lambda, r.x)},
            {"solver_kkt_residual", mddl::oracle::kkt_residual(effective, q, cfg.lambda, r.x)}};
      }
      write_json(out, solve_out);
    } else if (*cls) {
      const mddl::SolverConfig cfg = cls_opts.resolved();
      const mddl::Dictionary dict = prepare(cls_dict, cls_opts.no_normalize);
      const mddl::TestSet tests = mddl::load_test_set(cls_queries);
      const auto score = cls_score == "sum_abs" ? mddl::ClassScore::sum_abs : mddl::ClassScore::max_component;
      std::optional<mddl::FactorCache> cache;
      if (cfg.weighting == mddl::WeightingMode::none) cache.emplace(dict.data());

      std::ofstream file;
      if (!cls_out.empty() && cls_out != "-") {
        file.open(cls_out);
        if (!file) throw mddl::IoError("cannot write " + cls_out);
      }
      std::ostream& os = file.is_open() ? file : std::cout;
      for (Eigen::Index j = 0; j < tests.queries.cols(); ++j) {
        const mddl::Vector q = tests.queries.col(j);
        const auto r = mddl::solve_query(dict, q, cfg, cache ? &*cache : nullptr);
        const auto c = mddl::classify(r.x, r.weighting ? &*r.weighting : nullptr, dict.n(), dict.s(),
                                      cfg.weighting, score);
        const std::size_t top = std::min<std::size_t>(5, c.ranking.size());
        json line = {{"sample_id", j},
                     {"class_id", c.class_id},
                     {"inferred_domain", c.inferred_domain ? json(*c.inferred_domain) : json(nullptr)},
                     {"truth", tests.classes[static_cast<std::size_t>(j)]},
                     {"top5", std::vector<std::size_t>(c.ranking.begin(), c.ranking.begin() + top)}};
        if (c.degenerate) line["degenerate"] = true;
        os << line.dump() << '\n';
      }
    } else if (*bench) {
      mddl::ExperimentSpec spec = mddl::load_experiment_spec(bench_spec);
      if (bench_sweep && !spec.sweep) {
        spec.sweep = mddl::SweepSpec{};
        spec.sweep->solver = spec.configs.front().solver;
        spec.sweep->solver.weighting = mddl::WeightingMode::none;
      }
      if (!bench_sweep) spec.sweep.reset();
      if (!bench_out.empty()) spec.output_path = bench_out;
      const mddl::BenchReport report = mddl::run_experiment(spec);
      std::cout << mddl::report_to_table(report);
      return report.all_assertions_passed() ? 0 : 1;
    }
  } catch (const mddl::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
