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
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>

#include "mddl/dictionary.hpp"
#include "mddl/weighting.hpp"

namespace mddl {

enum class WeightingMode { none, softmax };

/// How the scaled dual variable is updated after the z-step.
enum class DualUpdate {
  scaled,  // y <- y + (x - z), rescaled when tau changes
  paper,   // y <- y + (1/tau)(x - z), kept for comparison only
};

std::string to_string(WeightingMode mode);
WeightingMode weighting_mode_from_string(const std::string& name);
std::string to_string(DualUpdate mode);
DualUpdate dual_update_from_string(const std::string& name);

struct SolverConfig {
  double lambda = 1.0;      // L1 penalty
  double l2_penalty = 0.0;  // Elastic-Net quadratic penalty; 0 gives the Lasso
  double tau0 = 0.1;        // initial tau; the ADMM penalty is 1/tau
  double tau_growth = 1.05; // tau_t = min(tau0 * growth^t, tau_max)
  double tau_max = 1.0;     // keeps the ADMM penalty 1/tau >= 1
  int max_iter = 200;
  double tol = 1e-3;
  WeightingMode weighting = WeightingMode::none;
  DualUpdate dual_update = DualUpdate::scaled;

  /// Throws InvalidArgument on any out-of-range field.
  void validate() const;
  double tau_at(int iteration) const;
};

/// Cached factorizations of (A^T A + rho I), keyed by rho.
///
/// The Gram matrix is formed once. When A is wide (d < m) the d x d matrix
/// (A A^T + rho I) is factored instead and the x-update goes through the
/// matrix-inversion identity. Lookups are thread-safe, so one cache may be
/// shared by concurrent solves against the same A.
class FactorCache {
 public:
  explicit FactorCache(Matrix a);

  const Matrix& matrix() const noexcept { return a_; }
  std::size_t rows() const noexcept { return static_cast<std::size_t>(a_.rows()); }
  std::size_t cols() const noexcept { return static_cast<std::size_t>(a_.cols()); }
  bool uses_dual_system() const noexcept { return dual_; }

  /// Solves (A^T A + rho I) x = rhs.
  Vector solve(double rho, const Vector& rhs) const;

  /// Cached factorization for rho; the reference stays valid for the cache's lifetime.
  const Eigen::LLT<Matrix>& factor(double rho) const;
  /// Same as solve() with a factorization previously returned by factor(rho).
  Vector solve(const Eigen::LLT<Matrix>& llt, double rho, const Vector& rhs) const;

  /// ||A z - b||^2 given A^T b and ||b||^2; O(m^2) when the m x m Gram is held.
  double residual_sq(const Vector& z, const Vector& b, const Vector& atb, double bb) const;

  /// Number of factorizations computed so far.
  std::size_t factorization_count() const;

  /// Forces the primal (m x m) or dual (d x d) system regardless of shape.
  static FactorCache with_system(Matrix a, bool dual);

 private:
  FactorCache(Matrix a, bool dual);
  void init_gram();

  Matrix a_;
  bool dual_;
  Matrix gram_;
  mutable std::shared_mutex mutex_;
  mutable std::map<double, std::unique_ptr<Eigen::LLT<Matrix>>> factors_;
};

struct SolveResult {
  Vector x;                   // final sparse code (the shrunk split variable)
  bool converged = false;
  int iterations = 0;
  double recovery_error = 0;  // ||A x - b|| / ||b||
  double primal_residual = 0; // ||x - z||_inf at exit
  double wall_time_s = 0;
  std::optional<WeightingMatrix> weighting;
};

Vector soft_shrink(const Vector& v, double kappa);

/// ADMM for min 1/2 ||A x - b||^2 + lambda ||x||_1 + l2/2 ||x||^2.
/// Uses `cache` when given (it must wrap the same A); otherwise builds a
/// query-local one.
SolveResult solve_admm(const Matrix& a, const Vector& b, const SolverConfig& cfg,
                       const FactorCache* cache = nullptr);

/// Solves one query against a dictionary. With softmax weighting the
/// weighting matrix is built from the query, the d x n product A_M M is
/// formed and solved, and the weighting is returned in the result.
SolveResult solve_query(const Dictionary& dict, const Vector& q, const SolverConfig& cfg,
                        const FactorCache* cache = nullptr);

/// 1/2 ||A x - b||^2 + lambda ||x||_1 + l2/2 ||x||^2.
double lasso_objective(const Matrix& a, const Vector& b, double lambda, const Vector& x,
                       double l2_penalty = 0.0);

}  // namespace mddl
