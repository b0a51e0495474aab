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

// Subgradient saddle-point method on the lifted Lagrangian
//
//   L(x, u, w) = c^T x + sum_i g~_i(x, u_i) + w^T (A x - b)
//
// with x in X, u_i in the capped cone U~_i (lambda <= lambda_bar) and w in the
// ball of radius R_w + 1, plus its split form, Slater point search and the
// a-priori feasibility and optimality bounds.

#include <cstdint>
#include <optional>

#include "rsp/splitting.hpp"
#include "rsp/trace.hpp"

namespace rsp {

enum class StepKind { TheoremScaled, AdaptiveNormalized };

struct StepPolicy {
  StepKind kind = StepKind::TheoremScaled;
  // TheoremScaled: tau = tau_tilde / sqrt(N), theta_i = theta_tilde_i / sqrt(N).
  double tau_tilde = 1.0;
  Vector theta_tilde;  // per constraint; empty uses theta_default
  double theta_default = 1.0;
  double theta_w_tilde = 1.0;
  // AdaptiveNormalized: step base / (||v|| sqrt(k)) per block.
  double base = 2.0;

  double theta(std::size_t i) const {
    return i < theta_tilde.size() ? theta_tilde[i] : theta_default;
  }
  static StepPolicy theorem(double tau_tilde, double theta_tilde, double theta_w_tilde);
  static StepPolicy adaptive(double base = 2.0);
};

struct SgspConfig {
  long n_iters = 1000;
  StepPolicy steps;
  Averaging averaging = Averaging::Uniform;
  long checkpoint_every = 100;
  std::optional<double> time_budget_s;
  // Evaluate the a-priori bound at checkpoints (TheoremScaled, unsplit only).
  bool certify = true;
  int constant_samples = 1000;
  std::uint64_t seed = 1;
};

struct ConvergenceConstants {
  double G_x = 0.0;
  Vector G;  // per constraint
  double G_w = 0.0;
  double phi = 0.0;
  Vector sigma;  // 1 + 4 R_i^2
  double prefactor = 0.0;  // max{2, max_i sigma_i} / 2
  // sum of squared distance terms over their step constants
  double dist_feas = 0.0;
  double dist_opt = 0.0;
  long n_iters = 0;

  // Bounds after k of the N iterations.
  double feasibility_bound(long k) const;
  double optimality_bound(long k) const;
};

// Samples random (x, u, w) in X x U~ x W to bound the subgradient norms and
// assembles the bound constants for the given start.
ConvergenceConstants estimate_constants(const RobustProblem& p, const DualBounds& bounds,
                                        const SgspConfig& cfg, const SaddleState& start);
// Recomputes phi after raising G_x and G_i to observed maxima.
void raise_constants(ConvergenceConstants& k, const SgspConfig& cfg, double g_x,
                     ConstVec g_u);

SaddleState initial_state(const RobustProblem& p, ConstVec x0);

// Default checkpoint measure: objective c^T x and
// sum_i [f_i(x)]_+ + ||A x - b||, NaN when some constraint cannot be
// pessimized.
CheckpointObserver default_observer(const RobustProblem& p);

IterTrace sgsp_run(const RobustProblem& p, const DualBounds& bounds, const SgspConfig& cfg,
                   const SaddleState& start, const CheckpointObserver& observer = {});

// Bounds for a lifted run. With x copies the copy equalities need their own
// multiplier radius, so the certificate is rebuilt on the lifted problem at
// the copied Slater point; otherwise `original` is returned.
DualBounds lifted_dual_bounds(const LiftedProblem& lifted, const DualBounds& original,
                              ConstVec x_hat);
IterTrace sgsp_run_split(const LiftedProblem& lifted, const DualBounds& bounds,
                         const SgspConfig& cfg, const SaddleState& start,
                         const CheckpointObserver& observer = {});

struct Certificate {
  double measured = 0.0;
  double bound = 0.0;
  double opt_bound = 0.0;
  bool holds = false;
};

// Measured feasibility of the final ergodic point against the bound after
// trace.iterations iterations.
Certificate certify(const IterTrace& trace, const RobustProblem& p,
                    const ConvergenceConstants& consts);

struct SlaterSearchResult {
  SlaterCertificate cert;
  long iterations = 0;
  int rounds = 0;
};

// Minimizes s subject to g_i(x, z) - s <= 0, s in [-1, t_bar], running SGSP
// with inner budgets K = 2, 4, 8, ... until max_i f_i < 0.
SlaterSearchResult slater_search(const RobustProblem& p, ConstVec x0, double delta = 1e-2,
                                 long budget = 100000,
                                 std::optional<double> v_lower = std::nullopt);

}  // namespace rsp
