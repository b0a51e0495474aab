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

// Extended saddle-point form for intersection domains X = X_1 cap ... cap X_q
// (variable copies tied by equality rows) and intersection uncertainty sets
// Z = Z_1 cap ... cap Z_s (duplicated lifted variables coupled through omega
// multipliers).

#include <vector>

#include "rsp/problem.hpp"
#include "rsp/trace.hpp"

namespace rsp {

struct LiftedProblem {
  // Lifted problem: x has x_copies * original_n entries, the domain is the
  // product of the simple domain factors, and copy equalities are appended to
  // (A, b). Constraint oracles act on copy 1.
  RobustProblem base;
  std::size_t original_n = 0;
  std::size_t x_copies = 1;
  // Simple factors Z_i1 .. Z_is_i of every uncertainty set.
  std::vector<std::vector<SetDescriptor>> factors;
  // One spec per (i, l < s_i).
  std::vector<std::vector<OmegaSpec>> omega_specs;

  std::size_t splits(std::size_t i) const { return factors[i].size(); }
  std::size_t u_blocks() const;
  std::size_t omega_blocks() const;
  // Offset of u_{i,0} in the flattened u list.
  std::size_t u_offset(std::size_t i) const;
  std::size_t omega_offset(std::size_t i) const;

  Vector recover_x(ConstVec x) const;
  SaddleState zero_state(ConstVec x0_original) const;
};

// Wraps p without any lifting (q = 1, s_i = 1). Intersections are kept as
// single factors.
LiftedProblem identity_lift(const RobustProblem& p);

// Copies x once per domain factor; constraints and objective act on copy 1.
LiftedProblem lift_domain_intersection(const RobustProblem& p, double rank_tol = 1e-8);

// Splits every intersection uncertainty set into its simple factors. The
// omega specs use eps_i = inscribed radius of Z_i and mu_bar_i from
// `mu_bar`, or from estimate_mu_bar when empty.
LiftedProblem lift_uncertainty_intersection(const RobustProblem& p, ConstVec mu_bar = {});
LiftedProblem lift_uncertainty_intersection(LiftedProblem lifted, ConstVec mu_bar = {});

// Omega parameters {-mu_bar_i <= mu <= 0, ||nu|| <= -mu / eps_i} for every
// l < s_i of the lifted problem.
std::vector<std::vector<OmegaSpec>> omega_bounds(const LiftedProblem& lifted, ConstVec eps,
                                                 ConstVec mu_bar);

// Approximately solves min { g_i(x, 0) : x in X, g_j(x, 0) <= 0, j != i } by a
// penalized projected subgradient method and returns
// mu_bar_i = max(-1.1 * min, 1e-3). Throws Unbounded if the estimate diverges.
Vector estimate_mu_bar(const RobustProblem& p, long budget = 20000);

// Value of the lifted Lagrangian part for constraint i:
// g~_i(x, u_{i,s}) + sum_l omega_il^T (u_il - u_is).
double lifted_coupling_value(const LiftedProblem& lifted, std::size_t i, ConstVec x,
                             const std::vector<LiftedVar>& u,
                             const std::vector<OmegaPoint>& omega);

}  // namespace rsp
