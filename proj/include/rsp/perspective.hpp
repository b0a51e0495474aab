// Copyright 2026 The rsp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Perspective functions g~(x, (z~, lambda)) = lambda g(x, z~/lambda), their
// subgradients, and the multiplier bounds implied by a Slater point.

#include "rsp/problem.hpp"

namespace rsp {

using LiftedVar = LiftedPoint;

double perspective_value(const Constraint& c, ConstVec x, const LiftedVar& u);

struct PerspectiveSubgrad {
  Vector dx;  // in the x-subdifferential of g~
  Vector du;  // in the u-subdifferential of -g~; length d + 1
};
PerspectiveSubgrad perspective_subgrad(const Constraint& c, ConstVec x, const LiftedVar& u);

struct SlaterCertificate {
  Vector x_hat;
  Vector f_hat;
  double eps_hat = 0.0;
  double v_lower = 0.0;
};

struct DualBounds {
  double lambda_bar = 0.0;
  double r_w = 0.0;
  Vector r_u;
  double r_pi = 0.0;
};

// -||c|| R_X - 1 for bounded X. Throws Unbounded otherwise.
double default_v_lower(const RobustProblem& p);

// Largest eps such that x_hat +- eps e_j stays in X with every f_i < 0, for
// all 2n axis directions, found by bisection.
double estimate_eps_hat(const RobustProblem& p, ConstVec x_hat, int iters = 50);

// Evaluates f_i(x_hat) and fills the certificate. Throws NotStrictlyFeasible
// if some f_i(x_hat) >= 0.
SlaterCertificate make_certificate(const RobustProblem& p, ConstVec x_hat,
                                   std::optional<double> v_lower = std::nullopt,
                                   std::optional<double> eps_hat = std::nullopt);

// radii[i] = max_{z in Z_i} ||z||. Uses -max_i f_hat_i in the lambda bound.
DualBounds dual_bounds(const RobustProblem& p, const SlaterCertificate& cert,
                       ConstVec radii);
Vector uncertainty_radii(const RobustProblem& p);

struct CompiledBiaffine;
// ||c|| + lambda_bar sum_i ||Q~_i|| (R_i + 1).
double r_pi_bound(const CompiledBiaffine& compiled, const DualBounds& bounds,
                  ConstVec radii);

}  // namespace rsp
