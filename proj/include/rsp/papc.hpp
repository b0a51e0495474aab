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

// Proximal alternating predictor-corrector method for biaffine problems:
//
//   min_chi max_y  c^T x + chi^T Qbar y + sum_i q~_i^T u_i - b^T w - sigma_X(pi)
//
// with Q~_i = [Q_i d_i], q~_i = (q_i; gamma_i) and Qbar = [Q~_1 .. Q~_m A^T I].
// Split problems append omega blocks to chi and difference blocks to Qbar.

#include <optional>

#include "rsp/splitting.hpp"
#include "rsp/trace.hpp"

namespace rsp {

// chi = (x, omega_11, ...), y = (u_11, ..., u_1s_1, ..., w, pi).
struct CompiledBiaffine {
  std::size_t n = 0;
  Vector c;
  std::vector<Matrix> Qt;  // n x (d_i + 1)
  std::vector<Vector> qt;  // d_i + 1
  Matrix A;                // r x n
  Vector b;
  std::vector<std::size_t> splits;  // s_i, 1 when unsplit

  std::size_t m() const { return Qt.size(); }
  std::size_t r() const { return b.size(); }
  std::size_t block_dim(std::size_t i) const { return Qt[i].cols(); }
  std::size_t u_dim() const;
  std::size_t omega_dim() const;
  std::size_t chi_dim() const { return n + omega_dim(); }
  std::size_t y_dim() const { return u_dim() + r() + n; }

  // Qbar y (chi-space) and Qbar^T chi (y-space), blockwise.
  Vector apply(ConstVec y) const;
  Vector apply_t(ConstVec chi) const;
  // Explicit Qbar; small instances only.
  Matrix dense() const;
};

CompiledBiaffine compile_biaffine(const RobustProblem& p);
CompiledBiaffine compile_biaffine(const LiftedProblem& lifted);

struct PapcConfig {
  double tau = 0.0;  // 0 selects (1 - margin) / lambda_max
  Vector theta_u;    // per constraint; empty means 1
  double theta_w = 1.0;
  double theta_pi = 1.0;
  long n_iters = 1000;
  long checkpoint_every = 100;
  double margin = 1e-6;
  std::optional<double> time_budget_s;

  double theta(std::size_t i) const { return i < theta_u.size() ? theta_u[i] : 1.0; }
};

// lambda_max(D Qbar^T Qbar D) with D = diag(sqrt(theta)), by power iteration.
double step_operator_norm(const CompiledBiaffine& compiled, const PapcConfig& cfg);
// tau * lambda_max(D Qbar^T Qbar D) <= 1 - margin.
bool validate_steps(const CompiledBiaffine& compiled, const PapcConfig& cfg);
// Fills tau when it is 0.
PapcConfig with_default_steps(const CompiledBiaffine& compiled, PapcConfig cfg);

// Data for the a-priori feasibility bound at checkpoints.
struct PapcBoundData {
  DualBounds bounds;
  Vector radii;  // R_il flattened like the u blocks
  // ||x* - x0||; defaults to R_X + ||x0||.
  std::optional<double> x_star_dist;
  // mu_bar_i and eps_i of split constraints (ignored when s_i = 1).
  Vector mu_bar;
  Vector eps;
};

double papc_feasibility_bound(const CompiledBiaffine& compiled, const PapcConfig& cfg,
                              const SetDescriptor& x_set, const SaddleState& start,
                              const PapcBoundData& data, long k);

// sum_i [f_i(x)]_+ + ||A x - b|| + dist(x, X).
double papc_measure(const RobustProblem& p, ConstVec x);

IterTrace papc_run(const CompiledBiaffine& compiled, const std::vector<SetDescriptor>& u_bases,
                   const SetDescriptor& x_set, const PapcConfig& cfg, const SaddleState& start,
                   const CheckpointObserver& observer = {},
                   const PapcBoundData* bound_data = nullptr);

// Convenience overloads that compile, default the steps and measure
// checkpoints on the problem itself.
IterTrace papc_run(const RobustProblem& p, const PapcConfig& cfg, const SaddleState& start,
                   const PapcBoundData* bound_data = nullptr,
                   const CheckpointObserver& observer = {});
IterTrace papc_run_split(const LiftedProblem& lifted, const PapcConfig& cfg,
                         const SaddleState& start, const CheckpointObserver& observer = {});

}  // namespace rsp
