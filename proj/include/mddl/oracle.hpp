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

#include "mddl/dictionary.hpp"

namespace mddl::oracle {

struct OracleConfig {
  int max_sweeps = 100000;
  double tol = 1e-12;
};

/// Cyclic coordinate descent for min 1/2 ||A x - b||^2 + lambda ||x||_1.
Vector lasso_cd(const Matrix& a, const Vector& b, double lambda, const OracleConfig& cfg = {});

/// Proximal gradient (ISTA) with fixed step 1 / ||A||_2^2.
Vector lasso_prox_grad(const Matrix& a, const Vector& b, double lambda, int max_iter = 200000,
                       double tol = 1e-13);

/// Largest violation of the Lasso stationarity conditions at x.
double kkt_residual(const Matrix& a, const Vector& b, double lambda, const Vector& x);

}  // namespace mddl::oracle
