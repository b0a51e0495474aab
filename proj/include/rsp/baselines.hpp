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

// Comparison methods for robust problems whose worst case can be computed
// exactly: scenario-based cutting planes, first-order pessimization and an
// online-convex-optimization scheme.

#include <memory>
#include <optional>

#include "rsp/qp.hpp"
#include "rsp/trace.hpp"

namespace rsp {

// Index 0 is the objective, 1..m the robust constraints.
class RobustModel {
 public:
  virtual ~RobustModel() = default;

  virtual std::size_t n() const = 0;
  virtual const SetDescriptor& domain() const = 0;
  virtual std::size_t m() const = 0;
  // 0 when the objective is certain.
  virtual std::size_t z_dim(std::size_t j) const = 0;

  // g_j(x, z), convex in x.
  virtual double value(std::size_t j, ConstVec x, ConstVec z) const = 0;
  virtual Vector grad_x(std::size_t j, ConstVec x, ConstVec z) const = 0;
  virtual Matrix hess_x(std::size_t j, ConstVec x, ConstVec z) const = 0;

  // Concave-in-z surrogate with the same worst case.
  virtual double bar_value(std::size_t j, ConstVec x, ConstVec z) const = 0;
  virtual Vector bar_grad_x(std::size_t j, ConstVec x, ConstVec z) const = 0;
  virtual Vector bar_grad_z(std::size_t j, ConstVec x, ConstVec z) const = 0;
  virtual Vector project_z(std::size_t j, ConstVec z) const = 0;

  virtual Pessimum pessimize(std::size_t j, ConstVec x) const = 0;
  // Interval containing every objective value over the domain.
  virtual std::pair<double, double> objective_range() const = 0;

  // max_{j >= 1} max_z g_j(x, z); -inf when m = 0.
  double feasibility_gap(ConstVec x) const;
  double worst_objective(ConstVec x) const { return pessimize(0, x).value; }
};

class QpModel final : public RobustModel {
 public:
  explicit QpModel(std::shared_ptr<const QpInstance> inst);

  std::size_t n() const override { return inst_->n; }
  const SetDescriptor& domain() const override { return domain_; }
  std::size_t m() const override { return inst_->m; }
  std::size_t z_dim(std::size_t) const override { return inst_->K; }
  double value(std::size_t j, ConstVec x, ConstVec z) const override;
  Vector grad_x(std::size_t j, ConstVec x, ConstVec z) const override;
  Matrix hess_x(std::size_t j, ConstVec x, ConstVec z) const override;
  double bar_value(std::size_t j, ConstVec x, ConstVec z) const override;
  Vector bar_grad_x(std::size_t j, ConstVec x, ConstVec z) const override;
  Vector bar_grad_z(std::size_t j, ConstVec x, ConstVec z) const override;
  Vector project_z(std::size_t j, ConstVec z) const override;
  Pessimum pessimize(std::size_t j, ConstVec x) const override;
  std::pair<double, double> objective_range() const override;

  const QpInstance& instance() const { return *inst_; }

 private:
  std::shared_ptr<const QpInstance> inst_;
  SetDescriptor domain_;
};

// A robust problem with a certain linear objective and no equalities.
// Constraints must be pessimizable; Hessians in x are taken as zero, so
// general oracles should be affine in x for the barrier master.
class ProblemModel final : public RobustModel {
 public:
  explicit ProblemModel(RobustProblem p);

  std::size_t n() const override { return p_.n(); }
  const SetDescriptor& domain() const override { return p_.domain; }
  std::size_t m() const override { return p_.m(); }
  std::size_t z_dim(std::size_t j) const override;
  double value(std::size_t j, ConstVec x, ConstVec z) const override;
  Vector grad_x(std::size_t j, ConstVec x, ConstVec z) const override;
  Matrix hess_x(std::size_t j, ConstVec x, ConstVec z) const override;
  double bar_value(std::size_t j, ConstVec x, ConstVec z) const override {
    return value(j, x, z);
  }
  Vector bar_grad_x(std::size_t j, ConstVec x, ConstVec z) const override {
    return grad_x(j, x, z);
  }
  Vector bar_grad_z(std::size_t j, ConstVec x, ConstVec z) const override;
  Vector project_z(std::size_t j, ConstVec z) const override;
  Pessimum pessimize(std::size_t j, ConstVec x) const override;
  std::pair<double, double> objective_range() const override;

 private:
  RobustProblem p_;
};

// Finite scenario sets per index (index 0 holds objective scenarios).
struct ScenarioSet {
  std::vector<std::vector<Vector>> z;

  std::size_t size() const;
};

struct MasterResult {
  Vector x;
  double value = 0.0;        // max over objective scenarios at x
  double lower_bound = 0.0;  // certified: value - (#constraints) / t
  int newton_steps = 0;
};

class MasterSolver {
 public:
  virtual ~MasterSolver() = default;
  // min_x max_{z in S_0} g_0(x, z) s.t. g_j(x, z) <= 0 for z in S_j, x in X.
  virtual MasterResult solve(const RobustModel& model, const ScenarioSet& scenarios,
                             ConstVec x_start) const = 0;
};

// Log-barrier interior point method on the epigraph form with a phase-I
// start. Domains: L2 balls, boxes, infinity-norm balls and products of these.
class BarrierMaster final : public MasterSolver {
 public:
  double tol = 1e-9;
  double mu = 10.0;
  int max_newton = 100;

  MasterResult solve(const RobustModel& model, const ScenarioSet& scenarios,
                     ConstVec x_start) const override;
};

struct CuttingPlaneOptions {
  double eps = 1e-3;
  long max_rounds = 200;
  std::optional<double> time_budget_s;
};

struct CuttingPlaneResult {
  IterTrace trace;
  ScenarioSet scenarios;
  std::vector<double> lower_bounds;
  std::vector<std::size_t> scenario_counts;
  bool converged = false;
  double lower_bound = -kInf;  // best certified bound
};

// One checkpoint per master solve.
CuttingPlaneResult cutting_planes(const RobustModel& model, const CuttingPlaneOptions& opts,
                                  const MasterSolver& master,
                                  const CheckpointObserver& observer = {});

double lower_bound_from_cuts(const RobustModel& model, const ScenarioSet& scenarios,
                             const MasterSolver& master);

// Solution of the nominal problem (every z = 0).
Vector nominal_start(const RobustModel& model, const MasterSolver& master);

struct FoPessOptions {
  double eps = 1e-3;
  double base = 2.0;  // step base / (||g|| sqrt(k))
  long checkpoint_every = 100;
  std::optional<double> time_budget_s;
};

// Switching subgradient method driven by exact pessimization: steps on the
// most violated constraint while it exceeds eps, otherwise on the worst-case
// objective. Reports the step-weighted average of objective-step iterates.
IterTrace fo_pess(const RobustModel& model, ConstVec x0, long budget,
                  const FoPessOptions& opts = {}, const CheckpointObserver& observer = {});

struct OcoOptions {
  double eps = 1e-3;
  double base = 2.0;
  long inner_budget = 2000;
  long checkpoint_every = 100;
  std::optional<double> time_budget_s;
};

// Bisection on the objective level tau. For each tau an online gradient
// game runs: x descends the largest of g-bar_j(x, z_j) and g-bar_0 - tau,
// each z_j ascends g-bar_j(x, .). The averaged x is accepted when it is
// eps-feasible for level tau.
IterTrace oco_ogd(const RobustModel& model, ConstVec x0, long budget, const OcoOptions& opts = {},
                  const CheckpointObserver& observer = {});

}  // namespace rsp
