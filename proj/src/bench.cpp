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

#include "mddl/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <memory>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

#include <sys/utsname.h>

#include "mddl/error.hpp"

namespace mddl {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

std::string environment_string() {
  std::ostringstream os;
  utsname u{};
  if (uname(&u) == 0) os << u.sysname << ' ' << u.release << ' ' << u.machine;
#if defined(__clang__)
  os << ", clang " << __clang_major__ << '.' << __clang_minor__;
#elif defined(__GNUC__)
  os << ", gcc " << __GNUC__ << '.' << __GNUC_MINOR__;
#endif
  os << ", " << std::thread::hardware_concurrency() << " hardware threads";
  return os.str();
}

std::string build_string() {
  std::string b = std::string("mddl ") + MDDL_VERSION;
#ifdef NDEBUG
  b += " (release)";
#else
  b += " (debug)";
#endif
  return b;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

double separation_from_json(const json& v) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    throw InvalidArgument("separation must be a number or \"inf\"");
  }
  return v.get<double>();
}

DictionaryChoice dictionary_choice_from_string(const std::string& s) {
  if (s == "source") return DictionaryChoice::source;
  if (s == "miscellaneous") return DictionaryChoice::miscellaneous;
  throw InvalidArgument("unknown dictionary choice '" + s + "'");
}

ClassScore class_score_from_string(const std::string& s) {
  if (s == "max_component") return ClassScore::max_component;
  if (s == "sum_abs") return ClassScore::sum_abs;
  throw InvalidArgument("unknown class score '" + s + "'");
}

}  // namespace

void SweepSpec::validate() const {
  if (d == 0 || n == 0) throw InvalidArgument("sweep d and n must be positive");
  if (s_values.empty()) throw InvalidArgument("sweep s_values must not be empty");
  if (s_values.front() == 0 || !std::is_sorted(s_values.begin(), s_values.end()) ||
      std::adjacent_find(s_values.begin(), s_values.end()) != s_values.end()) {
    throw InvalidArgument("sweep s_values must be positive and strictly increasing");
  }
  if (repeats == 0) throw InvalidArgument("sweep repeats must be at least 1");
  solver.validate();
}

void ExperimentSpec::validate() const {
  if (test_count == 0) throw InvalidArgument("test_count must be at least 1");
  if (configs.empty()) throw InvalidArgument("experiment needs at least one solver config");
  for (const auto& c : configs) {
    if (c.name.empty()) throw InvalidArgument("solver config names must not be empty");
    c.solver.validate();
  }
  for (std::size_t i = 0; i < configs.size(); ++i) {
    for (std::size_t j = i + 1; j < configs.size(); ++j) {
      if (configs[i].name == configs[j].name) {
        throw InvalidArgument("duplicate solver config name '" + configs[i].name + "'");
      }
    }
  }
  if (const auto* syn = std::get_if<SyntheticSpec>(&dataset)) {
    SyntheticSpec copy = *syn;
    copy.test_count = test_count;
    copy.validate();
  }
  if (sweep) sweep->validate();
}

bool BenchReport::all_assertions_passed() const {
  return std::all_of(assertions.begin(), assertions.end(),
                     [](const AssertionOutcome& a) { return a.passed; });
}

const BenchRow& BenchReport::row(const std::string& name) const {
  for (const auto& r : rows) {
    if (r.name == name) return r;
  }
  throw InvalidArgument("no report row named '" + name + "'");
}

std::vector<BenchConfig> default_bench_configs() {
  const SolverConfig base;
  std::vector<BenchConfig> configs(3);
  configs[0] = {"source_only", DictionaryChoice::source, base, ClassScore::max_component};
  configs[1] = {"mddl_without_m", DictionaryChoice::miscellaneous, base, ClassScore::max_component};
  configs[2] = {"mddl_with_m", DictionaryChoice::miscellaneous, base, ClassScore::max_component};
  configs[2].solver.weighting = WeightingMode::softmax;
  return configs;
}

BenchReport run_experiment(const ExperimentSpec& spec) {
  spec.validate();

  std::optional<Dictionary> raw;
  TestSet tests;
  if (const auto* syn = std::get_if<SyntheticSpec>(&spec.dataset)) {
    SyntheticSpec s = *syn;
    s.test_count = spec.test_count;
    SyntheticDataset data = gen_synthetic(s);
    raw.emplace(std::move(data.dictionary));
    tests = std::move(data.tests);
  } else {
    const auto& files = std::get<FileDataset>(spec.dataset);
    raw.emplace(load_dictionary(files.dictionary));
    tests = load_test_set(files.test_set);
    if (static_cast<std::size_t>(tests.queries.cols()) < spec.test_count) {
      throw InvalidArgument("test set has " + std::to_string(tests.queries.cols()) +
                            " queries, spec asks for " + std::to_string(spec.test_count));
    }
    if (static_cast<std::size_t>(tests.queries.rows()) != raw->d()) {
      throw DimensionError("test set d does not match the dictionary");
    }
  }
  const Dictionary misc = spec.normalize ? normalize_atoms(*raw) : *raw;
  const Dictionary source = misc.domain(0);
  raw.reset();

  BenchReport report;
  report.environment = environment_string();
  report.build = build_string();
  report.timestamp = utc_timestamp();

  for (const auto& cfg : spec.configs) {
    const Dictionary& dict = cfg.dictionary == DictionaryChoice::source ? source : misc;
    std::optional<FactorCache> cache;
    if (cfg.solver.weighting == WeightingMode::none) cache.emplace(dict.data());

    std::vector<ClassificationResult> results;
    std::vector<std::size_t> truth;
    std::vector<double> times, iterations;
    std::size_t converged = 0, failures = 0, correct = 0, correct_domain = 0;
    for (std::size_t j = 0; j < spec.test_count; ++j) {
      const Vector q = tests.queries.col(static_cast<Eigen::Index>(j));
      truth.push_back(tests.classes[j]);
      try {
        const SolveResult r = solve_query(dict, q, cfg.solver, cache ? &*cache : nullptr);
        times.push_back(r.wall_time_s);
        iterations.push_back(r.iterations);
        converged += r.converged;
        results.push_back(classify(r.x, r.weighting ? &*r.weighting : nullptr, dict.n(), dict.s(),
                                   cfg.solver.weighting, cfg.score));
      } catch (const NumericalError&) {
        ++failures;
        ClassificationResult failed;
        failed.class_id = std::numeric_limits<std::size_t>::max();
        results.push_back(std::move(failed));
        continue;
      }
      const auto& c = results.back();
      if (c.class_id == tests.classes[j]) {
        ++correct;
        if (!tests.domains.empty() && c.inferred_domain == tests.domains[j]) ++correct_domain;
      }
    }

    BenchRow row;
    row.name = cfg.name;
    row.accuracy = accuracy(results, truth);
    row.top5_recall = top_k_recall(results, truth, 5);
    row.mean_solve_time_s = mean_of(times);
    row.median_solve_time_s = median_of(times);
    row.iterations_mean = mean_of(iterations);
    row.converged_fraction = static_cast<double>(converged) / static_cast<double>(spec.test_count);
    row.failures = failures;
    if (!tests.domains.empty() && dict.s() > 1 && correct > 0) {
      row.domain_accuracy = static_cast<double>(correct_domain) / static_cast<double>(correct);
    }
    report.rows.push_back(std::move(row));
  }

  if (spec.sweep) report.sweep = scaling_sweep(*spec.sweep);
  evaluate_assertions(spec.assertions, report);
  if (!spec.output_path.empty()) write_report(report, spec.output_path);
  return report;
}

std::vector<ScalingRow> scaling_sweep(const SweepSpec& sweep) {
  sweep.validate();
  struct Case {
    Case(std::size_t s_, Dictionary d, Matrix q)
        : s(s_), dict(std::move(d)), queries(std::move(q)), cache(dict.data()) {}
    std::size_t s;
    Dictionary dict;
    Matrix queries;
    FactorCache cache;  // unweighted path, shared across that s's queries
    std::vector<double> tw, tu;
  };
  std::vector<std::unique_ptr<Case>> cases;
  for (const std::size_t s : sweep.s_values) {
    SyntheticSpec syn;
    syn.d = sweep.d;
    syn.n = sweep.n;
    syn.s = s;
    syn.seed = sweep.seed;
    syn.test_count = sweep.repeats;
    SyntheticDataset data = gen_synthetic(syn);
    cases.push_back(std::make_unique<Case>(s, normalize_atoms(data.dictionary),
                                           std::move(data.tests.queries)));
  }

  SolverConfig weighted = sweep.solver;
  weighted.weighting = WeightingMode::softmax;
  SolverConfig unweighted = sweep.solver;
  unweighted.weighting = WeightingMode::none;
  // Round-robin over s so machine-load drift affects every s alike.
  for (std::size_t j = 0; j < sweep.repeats; ++j) {
    for (auto& c : cases) {
      const Vector q = c->queries.col(static_cast<Eigen::Index>(j));
      c->tw.push_back(solve_query(c->dict, q, weighted).wall_time_s);
      c->tu.push_back(solve_query(c->dict, q, unweighted, &c->cache).wall_time_s);
    }
  }
  std::vector<ScalingRow> rows;
  for (const auto& c : cases) rows.push_back({c->s, median_of(c->tw), median_of(c->tu)});
  return rows;
}

void evaluate_assertions(const BenchAssertions& a, BenchReport& report) {
  auto add = [&](std::string what, bool ok) { report.assertions.push_back({std::move(what), ok}); };
  auto fmt = [](double v) {
    std::ostringstream os;
    os << std::setprecision(4) << v;
    return os.str();
  };
  auto acc = [&](const std::string& name) -> std::optional<double> {
    for (const auto& r : report.rows) {
      if (r.name == name) return r.accuracy;
    }
    return std::nullopt;
  };

  for (std::size_t i = 1; i < a.accuracy_order.size(); ++i) {
    const auto lo = acc(a.accuracy_order[i - 1]);
    const auto hi = acc(a.accuracy_order[i]);
    add("accuracy(" + a.accuracy_order[i - 1] + ") <= accuracy(" + a.accuracy_order[i] + ")",
        lo && hi && *lo <= *hi);
  }
  for (const auto& g : a.min_gaps) {
    const auto lo = acc(g.lower);
    const auto hi = acc(g.higher);
    add("accuracy(" + g.higher + ") - accuracy(" + g.lower + ") >= " + fmt(g.min_gap),
        lo && hi && *hi - *lo >= g.min_gap - 1e-12);
  }
  for (const auto& r : a.accuracy_ranges) {
    const auto v = acc(r.name);
    add("accuracy(" + r.name + ") in [" + fmt(r.min) + ", " + fmt(r.max) + "]",
        v && *v >= r.min && *v <= r.max);
  }
  if (a.top5_at_least_accuracy) {
    bool ok = true;
    for (const auto& r : report.rows) ok = ok && r.top5_recall >= r.accuracy;
    add("top5_recall >= accuracy for every config", ok);
  }
  if (a.min_domain_accuracy) {
    bool ok = true;
    bool any = false;
    for (const auto& r : report.rows) {
      if (r.domain_accuracy) {
        any = true;
        ok = ok && *r.domain_accuracy >= *a.min_domain_accuracy;
      }
    }
    add("domain inference accuracy >= " + fmt(*a.min_domain_accuracy), any && ok);
  }
  if (a.sweep_unweighted_ratio_min || a.sweep_weighted_ratio_max) {
    const bool have = report.sweep.size() >= 2;
    const double ru = have ? report.sweep.back().t_unweighted / report.sweep.front().t_unweighted : 0;
    const double rw = have ? report.sweep.back().t_weighted / report.sweep.front().t_weighted : 0;
    if (a.sweep_unweighted_ratio_min) {
      add("unweighted time ratio " + fmt(ru) + " >= " + fmt(*a.sweep_unweighted_ratio_min),
          have && ru >= *a.sweep_unweighted_ratio_min);
    }
    if (a.sweep_weighted_ratio_max) {
      add("weighted time ratio " + fmt(rw) + " <= " + fmt(*a.sweep_weighted_ratio_max),
          have && rw <= *a.sweep_weighted_ratio_max);
    }
  }
}

SolverConfig solver_config_from_json(const json& j, SolverConfig c) {
  try {
    c.lambda = j.value("lambda", c.lambda);
    c.l2_penalty = j.value("l2", j.value("l2_penalty", c.l2_penalty));
    c.tau0 = j.value("tau0", c.tau0);
    c.tau_growth = j.value("tau_growth", c.tau_growth);
    c.tau_max = j.value("tau_max", c.tau_max);
    c.max_iter = j.value("max_iter", c.max_iter);
    c.tol = j.value("tol", c.tol);
    if (j.contains("weighting")) c.weighting = weighting_mode_from_string(j.at("weighting").get<std::string>());
    if (j.contains("dual_update")) c.dual_update = dual_update_from_string(j.at("dual_update").get<std::string>());
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed solver config: ") + e.what());
  }
  return c;
}

json solver_config_to_json(const SolverConfig& c) {
  return {{"lambda", c.lambda},         {"l2", c.l2_penalty},
          {"tau0", c.tau0},             {"tau_growth", c.tau_growth},
          {"tau_max", c.tau_max},       {"max_iter", c.max_iter},
          {"tol", c.tol},               {"weighting", to_string(c.weighting)},
          {"dual_update", to_string(c.dual_update)}};
}

ExperimentSpec experiment_from_json(const json& j, const fs::path& base_dir) {
  ExperimentSpec spec;
  auto resolve = [&](const std::string& p) {
    fs::path path(p);
    return path.is_absolute() || base_dir.empty() ? path : base_dir / path;
  };
  try {
    const json& ds = j.at("dataset");
    if (ds.contains("synthetic")) {
      const json& sj = ds.at("synthetic");
      SyntheticSpec syn;
      syn.d = sj.value("d", syn.d);
      syn.n = sj.value("n", syn.n);
      syn.s = sj.value("s", syn.s);
      if (sj.contains("separation")) syn.separation = separation_from_json(sj.at("separation"));
      syn.seed = sj.value("seed", syn.seed);
      syn.amplitude = sj.value("amplitude", syn.amplitude);
      spec.dataset = syn;
    } else {
      spec.dataset = FileDataset{resolve(ds.at("dictionary").get<std::string>()),
                                 resolve(ds.at("test_set").get<std::string>())};
    }
    spec.test_count = j.value("test_count", spec.test_count);
    spec.normalize = j.value("normalize", spec.normalize);

    SolverConfig base = default_bench_configs().front().solver;
    if (j.contains("solver")) base = solver_config_from_json(j.at("solver"), base);
    if (j.contains("configs")) {
      for (const auto& cj : j.at("configs")) {
        BenchConfig c;
        c.name = cj.at("name").get<std::string>();
        c.dictionary = dictionary_choice_from_string(cj.value("dictionary", std::string("miscellaneous")));
        c.solver = solver_config_from_json(cj, base);
        c.score = class_score_from_string(cj.value("class_score", std::string("max_component")));
        spec.configs.push_back(std::move(c));
      }
    } else {
      spec.configs = default_bench_configs();
      for (auto& c : spec.configs) {
        const WeightingMode w = c.solver.weighting;
        c.solver = base;
        c.solver.weighting = w;
      }
    }
    if (j.contains("output")) spec.output_path = resolve(j.at("output").get<std::string>());

    if (j.contains("sweep")) {
      const json& sw = j.at("sweep");
      SweepSpec sweep;
      sweep.d = sw.value("d", sweep.d);
      sweep.n = sw.value("n", sweep.n);
      sweep.s_values = sw.value("s_values", sweep.s_values);
      sweep.repeats = sw.value("repeats", sweep.repeats);
      sweep.seed = sw.value("seed", sweep.seed);
      sweep.solver = sw.contains("solver") ? solver_config_from_json(sw.at("solver"), base) : base;
      spec.sweep = sweep;
    }

    if (j.contains("assertions")) {
      const json& aj = j.at("assertions");
      auto& a = spec.assertions;
      a.accuracy_order = aj.value("accuracy_order", std::vector<std::string>{});
      for (const auto& g : aj.value("min_gaps", json::array())) {
        a.min_gaps.push_back({g.at("lower").get<std::string>(), g.at("higher").get<std::string>(),
                              g.at("min_gap").get<double>()});
      }
      for (const auto& r : aj.value("accuracy_ranges", json::array())) {
        a.accuracy_ranges.push_back(
            {r.at("name").get<std::string>(), r.value("min", 0.0), r.value("max", 1.0)});
      }
      a.top5_at_least_accuracy = aj.value("top5_at_least_accuracy", false);
      if (aj.contains("min_domain_accuracy")) a.min_domain_accuracy = aj.at("min_domain_accuracy").get<double>();
      if (aj.contains("sweep_unweighted_ratio_min")) {
        a.sweep_unweighted_ratio_min = aj.at("sweep_unweighted_ratio_min").get<double>();
      }
      if (aj.contains("sweep_weighted_ratio_max")) {
        a.sweep_weighted_ratio_max = aj.at("sweep_weighted_ratio_max").get<double>();
      }
    }
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed experiment spec: ") + e.what());
  }
  return spec;
}

ExperimentSpec load_experiment_spec(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open experiment spec " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw IoError("corrupt experiment spec " + path.string() + ": " + e.what());
  }
  return experiment_from_json(j, path.parent_path());
}

json report_to_json(const BenchReport& report) {
  json rows = json::array();
  for (const auto& r : report.rows) {
    json row = {{"name", r.name},
                {"accuracy", r.accuracy},
                {"top5_recall", r.top5_recall},
                {"mean_solve_time_s", r.mean_solve_time_s},
                {"median_solve_time_s", r.median_solve_time_s},
                {"iterations_mean", r.iterations_mean},
                {"converged_fraction", r.converged_fraction},
                {"failures", r.failures}};
    row["domain_accuracy"] = r.domain_accuracy ? json(*r.domain_accuracy) : json(nullptr);
    rows.push_back(std::move(row));
  }
  json sweep = json::array();
  for (const auto& s : report.sweep) {
    sweep.push_back({{"s", s.s}, {"t_weighted_s", s.t_weighted}, {"t_unweighted_s", s.t_unweighted}});
  }
  json assertions = json::array();
  for (const auto& a : report.assertions) {
    assertions.push_back({{"assertion", a.description}, {"passed", a.passed}});
  }
  return {{"rows", rows},
          {"sweep", sweep},
          {"assertions", assertions},
          {"environment", report.environment},
          {"build", report.build},
          {"timestamp", report.timestamp}};
}

std::string report_to_table(const BenchReport& report) {
  std::ostringstream os;
  os << std::left << std::setw(24) << "config" << std::right << std::setw(10) << "accuracy"
     << std::setw(13) << "top5_recall" << std::setw(12) << "time_s" << std::setw(12)
     << "median_s" << std::setw(10) << "iters" << std::setw(10) << "domain" << '\n';
  os << std::fixed;
  for (const auto& r : report.rows) {
    os << std::left << std::setw(24) << r.name << std::right << std::setprecision(4)
       << std::setw(10) << r.accuracy << std::setw(13) << r.top5_recall << std::setprecision(5)
       << std::setw(12) << r.mean_solve_time_s << std::setw(12) << r.median_solve_time_s
       << std::setprecision(1) << std::setw(10) << r.iterations_mean;
    if (r.domain_accuracy) {
      os << std::setprecision(4) << std::setw(10) << *r.domain_accuracy;
    } else {
      os << std::setw(10) << "-";
    }
    os << '\n';
  }
  if (!report.sweep.empty()) {
    os << '\n' << std::setw(6) << "s" << std::setw(16) << "weighted_s" << std::setw(16)
       << "unweighted_s" << '\n';
    for (const auto& s : report.sweep) {
      os << std::setw(6) << s.s << std::setprecision(6) << std::setw(16) << s.t_weighted
         << std::setw(16) << s.t_unweighted << '\n';
    }
  }
  if (!report.assertions.empty()) {
    os << '\n';
    for (const auto& a : report.assertions) {
      os << (a.passed ? "PASS  " : "FAIL  ") << a.description << '\n';
    }
  }
  return os.str();
}

void write_report(const BenchReport& report, const fs::path& path) {
  {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write report " + path.string());
    out << report_to_json(report).dump(2) << '\n';
  }
  {
    std::ofstream out(path.string() + ".txt");
    if (!out) throw IoError("cannot write report table for " + path.string());
    out << report_to_table(report);
  }
  if (!report.sweep.empty()) {
    std::ofstream out(path.string() + ".sweep.csv");
    if (!out) throw IoError("cannot write sweep CSV for " + path.string());
    out << "s,t_weighted_s,t_unweighted_s\n" << std::setprecision(9);
    for (const auto& s : report.sweep) out << s.s << ',' << s.t_weighted << ',' << s.t_unweighted << '\n';
  }
}

}  // namespace mddl
