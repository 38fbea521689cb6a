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

#include "mddl/solver.hpp"

#include <chrono>
#include <cmath>
#include <mutex>

#include "mddl/error.hpp"

namespace mddl {

std::string to_string(WeightingMode mode) {
  return mode == WeightingMode::softmax ? "softmax" : "none";
}

WeightingMode weighting_mode_from_string(const std::string& name) {
  if (name == "none") return WeightingMode::none;
  if (name == "softmax") return WeightingMode::softmax;
  throw InvalidArgument("unknown weighting mode '" + name + "' (expected none or softmax)");
}

std::string to_string(DualUpdate mode) { return mode == DualUpdate::paper ? "paper" : "scaled"; }

DualUpdate dual_update_from_string(const std::string& name) {
  if (name == "scaled") return DualUpdate::scaled;
  if (name == "paper") return DualUpdate::paper;
  throw InvalidArgument("unknown dual update '" + name + "' (expected scaled or paper)");
}

void SolverConfig::validate() const {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(lambda)) throw InvalidArgument("lambda must be positive");
  if (!std::isfinite(l2_penalty) || l2_penalty < 0.0) {
    throw InvalidArgument("l2 penalty must be nonnegative");
  }
  if (!positive(tau0)) throw InvalidArgument("tau0 must be positive");
  if (!std::isfinite(tau_growth) || tau_growth < 1.0) throw InvalidArgument("tau growth must be >= 1");
  if (!positive(tau_max) || tau_max < tau0) throw InvalidArgument("tau cap must be >= tau0");
  if (max_iter < 1) throw InvalidArgument("max_iter must be positive");
  if (!positive(tol)) throw InvalidArgument("tol must be positive");
}

double SolverConfig::tau_at(int iteration) const {
  if (tau_growth == 1.0) return tau0;
  return std::min(tau0 * std::pow(tau_growth, iteration), tau_max);
}

FactorCache::FactorCache(Matrix a) : a_(std::move(a)), dual_(a_.rows() < a_.cols()) {
  init_gram();
}

FactorCache::FactorCache(Matrix a, bool dual) : a_(std::move(a)), dual_(dual) { init_gram(); }

void FactorCache::init_gram() {
  if (a_.size() == 0) throw DimensionError("cannot factor an empty matrix");
  gram_ = dual_ ? Matrix(a_ * a_.transpose()) : Matrix(a_.transpose() * a_);
}

FactorCache FactorCache::with_system(Matrix a, bool dual) { return FactorCache(std::move(a), dual); }

const Eigen::LLT<Matrix>& FactorCache::factor(double rho) const {
  {
    std::shared_lock lock(mutex_);
    if (auto it = factors_.find(rho); it != factors_.end()) return *it->second;
  }
  auto llt = std::make_unique<Eigen::LLT<Matrix>>(
      gram_ + rho * Matrix::Identity(gram_.rows(), gram_.cols()));
  if (llt->info() != Eigen::Success) {
    throw NumericalError("Cholesky factorization failed for rho = " + std::to_string(rho), 0);
  }
  std::unique_lock lock(mutex_);
  auto [it, inserted] = factors_.try_emplace(rho, std::move(llt));
  return *it->second;
}

double FactorCache::residual_sq(const Vector& z, const Vector& b, const Vector& atb,
                                double bb) const {
  if (dual_) return (a_ * z - b).squaredNorm();
  return std::max(z.dot(gram_ * z) - 2.0 * z.dot(atb) + bb, 0.0);
}

Vector FactorCache::solve(double rho, const Vector& rhs) const { return solve(factor(rho), rho, rhs); }

Vector FactorCache::solve(const Eigen::LLT<Matrix>& llt, double rho, const Vector& rhs) const {
  if (!dual_) return llt.solve(rhs);
  // (A^T A + rho I)^{-1} = (I - A^T (A A^T + rho I)^{-1} A) / rho
  const Vector inner = llt.solve(a_ * rhs);
  return (rhs - a_.transpose() * inner) / rho;
}

std::size_t FactorCache::factorization_count() const {
  std::shared_lock lock(mutex_);
  return factors_.size();
}

Vector soft_shrink(const Vector& v, double kappa) {
  if (!(kappa >= 0.0)) throw InvalidArgument("shrinkage threshold must be nonnegative");
  return v.unaryExpr([kappa](double vi) {
    const double mag = std::abs(vi) - kappa;
    return mag > 0.0 ? std::copysign(mag, vi) : 0.0;
  });
}

double lasso_objective(const Matrix& a, const Vector& b, double lambda, const Vector& x,
                       double l2_penalty) {
  return 0.5 * (a * x - b).squaredNorm() + lambda * x.lpNorm<1>() +
         0.5 * l2_penalty * x.squaredNorm();
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double relative_residual(const Matrix& a, const Vector& x, const Vector& b, double floor) {
  const double denom = std::max(b.norm(), floor);
  const double r = (a * x - b).norm();
  return denom > 0.0 ? r / denom : r;
}

}  // namespace

SolveResult solve_admm(const Matrix& a, const Vector& b, const SolverConfig& cfg,
                       const FactorCache* cache) {
  cfg.validate();
  if (a.cols() < 1) throw DimensionError("dictionary must have at least one column");
  if (b.size() != a.rows()) {
    throw DimensionError("query has length " + std::to_string(b.size()) + ", dictionary has " +
                         std::to_string(a.rows()) + " rows");
  }
  if (cache && (static_cast<Eigen::Index>(cache->rows()) != a.rows() ||
                static_cast<Eigen::Index>(cache->cols()) != a.cols())) {
    throw DimensionError("factor cache was built for a different matrix shape");
  }
  const auto start = Clock::now();

  std::optional<FactorCache> local;
  if (!cache) cache = &local.emplace(a);

  const Eigen::Index m = a.cols();
  const Vector atb = a.transpose() * b;
  const double bb = b.squaredNorm();
  const double fit_bound = cfg.tol * cfg.tol * std::max(bb, 1.0);
  Vector x = Vector::Zero(m);
  Vector z = Vector::Zero(m);
  Vector y = Vector::Zero(m);
  Vector z_prev(m);

  SolveResult result;
  double tau_prev = cfg.tau_at(0);
  const Eigen::LLT<Matrix>* llt = nullptr;
  double llt_rho = 0.0;
  for (int t = 0; t < cfg.max_iter; ++t) {
    const double tau = cfg.tau_at(t);
    // y holds the dual scaled by tau; keep the unscaled dual fixed when tau moves.
    if (cfg.dual_update == DualUpdate::scaled && tau != tau_prev) y *= tau / tau_prev;
    tau_prev = tau;
    const double penalty = 1.0 / tau;

    const double rho = cfg.l2_penalty + penalty;
    if (!llt || rho != llt_rho) llt = &cache->factor(llt_rho = rho);
    x = cache->solve(*llt, rho, atb + penalty * (z - y));
    z_prev = z;
    z = soft_shrink(x + y, cfg.lambda * tau);
    if (cfg.dual_update == DualUpdate::scaled) {
      y += x - z;
    } else {
      y += penalty * (x - z);
    }
    result.iterations = t + 1;
    if (!x.allFinite() || !z.allFinite() || !y.allFinite()) {
      throw NumericalError("non-finite iterate at iteration " + std::to_string(t + 1), t + 1);
    }

    result.primal_residual = (x - z).lpNorm<Eigen::Infinity>();
    if (result.primal_residual <= cfg.tol) {
      // The fit test runs only when the cheaper iterate test fails.
      const bool settled = (z - z_prev).lpNorm<Eigen::Infinity>() <= cfg.tol;
      if (settled || cache->residual_sq(z, b, atb, bb) <= fit_bound) {
        result.converged = true;
        break;
      }
    }
  }
  result.x = std::move(z);
  result.recovery_error = relative_residual(a, result.x, b, 0.0);
  result.wall_time_s = seconds_since(start);
  return result;
}

SolveResult solve_query(const Dictionary& dict, const Vector& q, const SolverConfig& cfg,
                        const FactorCache* cache) {
  if (static_cast<std::size_t>(q.size()) != dict.d()) {
    throw DimensionError("query has length " + std::to_string(q.size()) + ", dictionary d = " +
                         std::to_string(dict.d()));
  }
  if (cfg.weighting == WeightingMode::none) return solve_admm(dict.data(), q, cfg, cache);

  const auto start = Clock::now();
  WeightingMatrix weights = build_weighting(dict, q);
  const Matrix effective = weighted_dictionary(dict, weights);
  SolveResult result = solve_admm(effective, q, cfg);
  result.weighting = std::move(weights);
  result.wall_time_s = seconds_since(start);
  return result;
}

}  // namespace mddl
