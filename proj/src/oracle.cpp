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

#include "mddl/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "mddl/error.hpp"

namespace mddl::oracle {

namespace {

double shrink(double v, double kappa) {
  if (v > kappa) return v - kappa;
  if (v < -kappa) return v + kappa;
  return 0.0;
}

void check_shapes(const Matrix& a, const Vector& b) {
  if (a.rows() != b.size()) throw DimensionError("oracle: A rows and b length differ");
  if (a.cols() == 0) throw DimensionError("oracle: A has no columns");
}

}  // namespace

Vector lasso_cd(const Matrix& a, const Vector& b, double lambda, const OracleConfig& cfg) {
  check_shapes(a, b);
  if (!(lambda > 0.0)) throw InvalidArgument("oracle: lambda must be positive");
  const Eigen::Index m = a.cols();
  Vector col_sq(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    col_sq[j] = a.col(j).squaredNorm();
    if (col_sq[j] == 0.0) {
      throw InvalidArgument("oracle: column " + std::to_string(j) + " is zero");
    }
  }
  Vector x = Vector::Zero(m);
  Vector r = b;  // b - A x
  for (int sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
    double max_change = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) {
      const double old = x[j];
      const double rho = a.col(j).dot(r) + col_sq[j] * old;
      const double updated = shrink(rho, lambda) / col_sq[j];
      if (updated != old) {
        r -= (updated - old) * a.col(j);
        x[j] = updated;
        max_change = std::max(max_change, std::abs(updated - old));
      }
    }
    if (max_change <= cfg.tol) break;
  }
  return x;
}

Vector lasso_prox_grad(const Matrix& a, const Vector& b, double lambda, int max_iter, double tol) {
  check_shapes(a, b);
  // Lipschitz constant of the smooth part is the largest eigenvalue of A^T A.
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(a.transpose() * a, Eigen::EigenvaluesOnly);
  const double lipschitz = eig.eigenvalues().maxCoeff();
  const double step = 1.0 / lipschitz;
  Vector x = Vector::Zero(a.cols());
  for (int it = 0; it < max_iter; ++it) {
    const Vector grad = a.transpose() * (a * x - b);
    Vector next = x - step * grad;
    for (Eigen::Index i = 0; i < next.size(); ++i) next[i] = shrink(next[i], step * lambda);
    const double change = (next - x).lpNorm<Eigen::Infinity>();
    x = std::move(next);
    if (change <= tol) break;
  }
  return x;
}

double kkt_residual(const Matrix& a, const Vector& b, double lambda, const Vector& x) {
  check_shapes(a, b);
  if (x.size() != a.cols()) throw DimensionError("oracle: x length does not match A");
  const Vector g = a.transpose() * (a * x - b);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    const double v = x[i] == 0.0 ? std::max(std::abs(g[i]) - lambda, 0.0)
                                 : std::abs(g[i] + lambda * (x[i] > 0.0 ? 1.0 : -1.0));
    worst = std::max(worst, v);
  }
  return worst;
}

}  // namespace mddl::oracle
