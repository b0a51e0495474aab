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

// Robust quadratic programs
//
//   min_{||x|| <= 1} max_{||z|| <= 1} g_0(x, z)
//   s.t. g_i(x, z) <= 0 for all ||z|| <= 1, i = 1..m,
//   g_i(x, z) = ||(P_i0 + sum_k z_k P_ik) x||^2 + b_i^T x + c_i,
//
// their concave-in-z reformulation and exact pessimization through the
// trust-region subproblem.

#include <cstdint>
#include <memory>

#include <json.hpp>

#include "rsp/problem.hpp"

namespace rsp {

struct QpInstance {
  std::size_t n = 0, K = 0, L = 0, m = 0;
  std::uint64_t seed = 0;
  // P[i][k] is L x n for i = 0..m, k = 0..K.
  std::vector<std::vector<Matrix>> P;
  std::vector<Vector> b;  // m + 1 vectors of length n
  Vector c;               // m + 1 constants

  // A_i(z) = P_i0 + sum_k z_k P_ik
  Matrix a_of_z(std::size_t i, ConstVec z) const;
  // Columns P_ik x, k = 1..K (L x K).
  Matrix p_of_x(std::size_t i, ConstVec x) const;
};

// Entries uniform on [-1, 1] from mt19937_64(seed); the stacked P_i blocks
// are scaled to spectral norm 1 and b_i to unit length; c_i = -0.05.
QpInstance gen_instance(std::size_t n, std::size_t K, std::size_t L, std::size_t m,
                        std::uint64_t seed);

nlohmann::json qp_to_json(const QpInstance& inst);
QpInstance qp_from_json(const nlohmann::json& j);
// Spectral norm of [P_i0; ...; P_iK].
double stacked_norm(const QpInstance& inst, std::size_t i);

double qp_value(const QpInstance& inst, std::size_t i, ConstVec x, ConstVec z);
// 2 A(z)^T A(z) x + b
Vector qp_grad_x(const QpInstance& inst, std::size_t i, ConstVec x, ConstVec z);
// 2 A(z)^T A(z)
Matrix qp_hess_x(const QpInstance& inst, std::size_t i, ConstVec z);

struct EigenPair {
  double value = 0.0;
  Vector vector;
};
// Largest eigenvalue of a symmetric matrix by shifted power iteration with a
// residual test at 1e-9, falling back to the QL eigensolver.
EigenPair lambda_max_pair(const Matrix& sym);
double lambda_max(const Matrix& sym);

// g-bar(x, z) = z^T M z + 2 r^T z + s with M = Q(x) - shift I,
// s = s(x) + shift and shift = lambda_max(Q(x)).
struct ConcaveQuadratic {
  Matrix M;
  Vector r;
  double s = 0.0;
  double shift = 0.0;  // lambda_max(Q(x))
  Vector top;          // unit eigenvector of Q(x) for shift

  double value(ConstVec z) const;
};

// Q(x) = P(x)^T P(x), r(x) = P(x)^T P_i0 x, s(x) = ||P_i0 x||^2 + b_i^T x + c_i.
// The maximum of g-bar over the unit ball equals the maximum of g.
ConcaveQuadratic concavify(const QpInstance& inst, std::size_t i, ConstVec x);

// g-bar_i(x, z) = g_i(x, z) + lambda_max(Q(x)) (1 - ||z||^2) and its gradients.
double qp_bar_value(const QpInstance& inst, std::size_t i, ConstVec x, ConstVec z);
Vector qp_bar_grad_x(const QpInstance& inst, std::size_t i, ConstVec x, ConstVec z);
Vector qp_bar_grad_z(const QpInstance& inst, std::size_t i, ConstVec x, ConstVec z);

struct TrsResult {
  Vector z;
  double value = 0.0;
  double sigma = 0.0;
  double kkt_residual = 0.0;  // ||(M - sigma I) z + r||
  bool hard_case = false;
};
// max z^T M z + 2 r^T z + s over ||z|| <= radius for any symmetric M.
TrsResult trs_solve(const Matrix& M, ConstVec r, double s, double radius = 1.0);
TrsResult trs_solve(const ConcaveQuadratic& cq, double radius = 1.0);

Pessimum qp_pessimize(const QpInstance& inst, std::size_t i, ConstVec x);
// max_{i >= 1} max_z g_i(x, z); -inf when m = 0.
double feasibility_gap(const QpInstance& inst, ConstVec x);
double worst_objective(const QpInstance& inst, ConstVec x);
// +inf when fg > eps, else (worst - lb) / max(|lb|, 1e-6).
double ogr_from(double fg, double worst, double lb, double eps);
double optimality_gap_ratio(const QpInstance& inst, ConstVec x, double lb, double eps);

// Bounds on g_i over the unit balls: |g_i| <= 3.05.
inline constexpr double kQpValueBound = 3.05;

// Concave-in-z constraint g-bar_i with a trust-region pessimizer.
Constraint qp_constraint(std::shared_ptr<const QpInstance> inst, std::size_t i);
// Epigraph form over (x, t): min t s.t. g-bar_0 - t <= 0, g-bar_i <= 0,
// ||x|| <= 1, t in [-1.1, 3.1].
RobustProblem qp_epigraph_problem(std::shared_ptr<const QpInstance> inst);

}  // namespace rsp
