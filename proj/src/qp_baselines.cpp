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

#include <algorithm>
#include <chrono>
#include <cmath>

#include "rsp/baselines.hpp"
#include "rsp/error.hpp"

namespace rsp {

double RobustModel::feasibility_gap(ConstVec x) const {
  double fg = -kInf;
  for (std::size_t j = 1; j <= m(); ++j) fg = std::max(fg, pessimize(j, x).value);
  return fg;
}

// QP model

QpModel::QpModel(std::shared_ptr<const QpInstance> inst)
    : inst_(std::move(inst)), domain_(SetDescriptor::l2_ball(inst_->n, 1.0)) {}

double QpModel::value(std::size_t j, ConstVec x, ConstVec z) const {
  return qp_value(*inst_, j, x, z);
}
Vector QpModel::grad_x(std::size_t j, ConstVec x, ConstVec z) const {
  return qp_grad_x(*inst_, j, x, z);
}
Matrix QpModel::hess_x(std::size_t j, ConstVec, ConstVec z) const {
  return qp_hess_x(*inst_, j, z);
}
double QpModel::bar_value(std::size_t j, ConstVec x, ConstVec z) const {
  return qp_bar_value(*inst_, j, x, z);
}
Vector QpModel::bar_grad_x(std::size_t j, ConstVec x, ConstVec z) const {
  return qp_bar_grad_x(*inst_, j, x, z);
}
Vector QpModel::bar_grad_z(std::size_t j, ConstVec x, ConstVec z) const {
  return qp_bar_grad_z(*inst_, j, x, z);
}
Vector QpModel::project_z(std::size_t, ConstVec z) const {
  return project_simple(SetDescriptor::l2_ball(inst_->K, 1.0), z);
}
Pessimum QpModel::pessimize(std::size_t j, ConstVec x) const {
  return qp_pessimize(*inst_, j, x);
}
std::pair<double, double> QpModel::objective_range() const {
  return {-kQpValueBound, kQpValueBound};
}

// Robust-problem model

ProblemModel::ProblemModel(RobustProblem p) : p_(std::move(p)) {
  require(p_.r() == 0, ErrorCode::InvalidArgument,
          "baselines do not support equality constraints");
  for (const auto& c : p_.constraints)
    require(c.can_pessimize(), ErrorCode::RequiresPessimizer,
            "baselines need exact pessimization");
}

std::size_t ProblemModel::z_dim(std::size_t j) const {
  return j == 0 ? 0 : p_.constraints[j - 1].z_dim();
}

double ProblemModel::value(std::size_t j, ConstVec x, ConstVec z) const {
  return j == 0 ? dot(p_.c, x) : p_.constraints[j - 1].eval(x, z);
}

Vector ProblemModel::grad_x(std::size_t j, ConstVec x, ConstVec z) const {
  return j == 0 ? p_.c : p_.constraints[j - 1].subgrad_x(x, z);
}

Matrix ProblemModel::hess_x(std::size_t, ConstVec, ConstVec) const {
  return Matrix(p_.n(), p_.n());
}

Vector ProblemModel::bar_grad_z(std::size_t j, ConstVec x, ConstVec z) const {
  if (j == 0) return {};
  return scaled(-1.0, p_.constraints[j - 1].subgrad_negz(x, z));
}

Vector ProblemModel::project_z(std::size_t j, ConstVec z) const {
  if (j == 0) return {};
  return project_simple(p_.constraints[j - 1].zset(), z);
}

Pessimum ProblemModel::pessimize(std::size_t j, ConstVec x) const {
  if (j == 0) return {{}, dot(p_.c, x)};
  return p_.constraints[j - 1].pessimize(x);
}

std::pair<double, double> ProblemModel::objective_range() const {
  const double rx = outer_radius(p_.domain);
  require(std::isfinite(rx), ErrorCode::Unbounded, "domain must be bounded");
  const double w = norm(p_.c) * rx;
  return {-w, w};
}

std::size_t ScenarioSet::size() const {
  std::size_t s = 0;
  for (const auto& v : z) s += v.size();
  return s;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Smooth convex function of v with value, gradient and Hessian.
struct SmoothFn {
  std::function<double(const Vector&, Vector*, Matrix*)> eval;
};

void add_domain_constraints(const SetDescriptor& s, std::size_t offset, std::size_t dim_total,
                            std::vector<SmoothFn>& out) {
  const std::size_t d = s.dim();
  switch (s.kind()) {
    case SetKind::L2Ball: {
      const double r2 = s.radius() * s.radius();
      out.push_back({[=](const Vector& v, Vector* g, Matrix* h) {
        double ss = 0.0;
        for (std::size_t j = 0; j < d; ++j) ss += v[offset + j] * v[offset + j];
        if (g) {
          g->assign(dim_total, 0.0);
          for (std::size_t j = 0; j < d; ++j) (*g)[offset + j] = 2.0 * v[offset + j];
        }
        if (h) {
          *h = Matrix(dim_total, dim_total);
          for (std::size_t j = 0; j < d; ++j) (*h)(offset + j, offset + j) = 2.0;
        }
        return ss - r2;
      }});
      return;
    }
    case SetKind::LinfBall:
    case SetKind::Box: {
      for (std::size_t j = 0; j < d; ++j) {
        const double lo = s.kind() == SetKind::Box ? s.lo()[j] : -s.radius();
        const double hi = s.kind() == SetKind::Box ? s.hi()[j] : s.radius();
        for (int sign : {1, -1}) {
          const double bound = sign > 0 ? hi : lo;
          if (!std::isfinite(bound)) continue;
          const std::size_t idx = offset + j;
          out.push_back({[=](const Vector& v, Vector* g, Matrix* h) {
            if (g) {
              g->assign(dim_total, 0.0);
              (*g)[idx] = sign;
            }
            if (h) *h = Matrix(dim_total, dim_total);
            return sign * (v[idx] - bound);
          }});
        }
      }
      return;
    }
    case SetKind::Product: {
      std::size_t off = offset;
      for (const auto& part : s.parts()) {
        add_domain_constraints(part, off, dim_total, out);
        off += part.dim();
      }
      return;
    }
    default:
      fail(ErrorCode::MasterFailure,
           "barrier master supports balls, boxes and their products; got " +
               std::string(to_string(s.kind())));
  }
}

Vector interior_point(const SetDescriptor& s) {
  switch (s.kind()) {
    case SetKind::Box: {
      Vector v(s.dim());
      for (std::size_t j = 0; j < v.size(); ++j) {
        const double lo = s.lo()[j], hi = s.hi()[j];
        if (std::isfinite(lo) && std::isfinite(hi)) v[j] = 0.5 * (lo + hi);
        else if (std::isfinite(lo)) v[j] = lo + 1.0;
        else if (std::isfinite(hi)) v[j] = hi - 1.0;
      }
      return v;
    }
    case SetKind::Product: {
      Vector v;
      for (const auto& part : s.parts()) {
        const Vector pv = interior_point(part);
        v.insert(v.end(), pv.begin(), pv.end());
      }
      return v;
    }
    default:
      return Vector(s.dim(), 0.0);
  }
}

struct BarrierOutcome {
  Vector v;
  double t = 1.0;
  int steps = 0;
  bool stopped = false;
};

// Minimizes cost^T v subject to h_j(v) < 0 from a strictly feasible v.
BarrierOutcome barrier_minimize(const Vector& cost, const std::vector<SmoothFn>& hs, Vector v,
                                double tol, double mu, int max_newton,
                                const std::function<bool(const Vector&)>& stop) {
  const std::size_t d = v.size();
  const double mc = static_cast<double>(hs.size());
  BarrierOutcome out;
  auto feasible_value = [&](const Vector& y, double t, double* val) {
    double phi = t * dot(cost, y);
    for (const auto& h : hs) {
      const double hv = h.eval(y, nullptr, nullptr);
      if (!(hv < 0.0)) return false;
      phi -= std::log(-hv);
    }
    *val = phi;
    return true;
  };
  double t = 1.0;
  for (int outer = 0; outer < 200; ++outer) {
    for (int it = 0; it < max_newton; ++it) {
      Vector grad = scaled(t, cost);
      Matrix hess(d, d);
      Vector gh;
      Matrix hh;
      for (const auto& h : hs) {
        const double hv = h.eval(v, &gh, &hh);
        const double inv = -1.0 / hv;
        axpy(inv, gh, grad);
        for (std::size_t a = 0; a < d; ++a)
          for (std::size_t b = 0; b < d; ++b)
            hess(a, b) += inv * inv * gh[a] * gh[b] + inv * hh(a, b);
      }
      Vector step;
      double reg = 0.0;
      for (int attempt = 0; attempt < 8; ++attempt) {
        Matrix hr = hess;
        for (std::size_t a = 0; a < d; ++a) hr(a, a) += reg;
        try {
          step = solve_spd(hr, grad);
          break;
        } catch (const Error&) {
          double tr = 0.0;
          for (std::size_t a = 0; a < d; ++a) tr += std::abs(hess(a, a));
          reg = reg == 0.0 ? 1e-12 * std::max(tr, 1.0) : reg * 100.0;
        }
      }
      if (step.empty()) fail(ErrorCode::MasterFailure, "barrier Newton system is singular");
      const double dec = dot(grad, step);
      if (dec / 2.0 <= 1e-10) break;
      double phi0 = 0.0;
      feasible_value(v, t, &phi0);
      double alpha = 1.0;
      Vector trial(d);
      bool moved = false;
      for (int bt = 0; bt < 60; ++bt) {
        for (std::size_t a = 0; a < d; ++a) trial[a] = v[a] - alpha * step[a];
        double phi = 0.0;
        if (feasible_value(trial, t, &phi) && phi <= phi0 - 0.25 * alpha * dec) {
          moved = true;
          break;
        }
        alpha *= 0.5;
      }
      ++out.steps;
      if (!moved) break;
      v = trial;
      if (stop && stop(v)) {
        out.v = v;
        out.t = t;
        out.stopped = true;
        return out;
      }
    }
    if (mc / t < tol) break;
    t *= mu;
  }
  out.v = v;
  out.t = t;
  return out;
}

}  // namespace

MasterResult BarrierMaster::solve(const RobustModel& model, const ScenarioSet& scenarios,
                                  ConstVec x_start) const {
  const std::size_t n = model.n();
  const std::size_t d = n + 1;  // (x, t)
  require(scenarios.z.size() == model.m() + 1, ErrorCode::DimensionMismatch,
          "one scenario list per index");
  const auto [obj_lo, obj_hi] = model.objective_range();
  const double t_lo = obj_lo - 1.0, t_hi = obj_hi + 1.0;

  std::vector<SmoothFn> hs;
  for (std::size_t j = 0; j <= model.m(); ++j) {
    std::vector<Vector> list = scenarios.z[j];
    if (j == 0 && list.empty()) list.push_back(Vector(model.z_dim(0), 0.0));
    for (const Vector& z : list) {
      hs.push_back({[&model, j, z, n, d](const Vector& v, Vector* g, Matrix* h) {
        const ConstVec x(v.data(), n);
        const double val = model.value(j, x, z);
        if (g) {
          *g = model.grad_x(j, x, z);
          g->resize(d, 0.0);
          if (j == 0) (*g)[n] = -1.0;
        }
        if (h) {
          const Matrix hx = model.hess_x(j, x, z);
          *h = Matrix(d, d);
          for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) (*h)(a, b) = hx(a, b);
        }
        return j == 0 ? val - v[n] : val;
      }});
    }
  }
  add_domain_constraints(model.domain(), 0, d, hs);
  add_domain_constraints(SetDescriptor::box({t_lo}, {t_hi}), n, d, hs);

  auto max_h = [&](const Vector& v) {
    double mx = -kInf;
    for (const auto& h : hs) mx = std::max(mx, h.eval(v, nullptr, nullptr));
    return mx;
  };

  Vector v = x_start.size() == n ? Vector(x_start.begin(), x_start.end())
                                 : interior_point(model.domain());
  {
    double obj = -kInf;
    for (std::size_t s = 0; s < std::max<std::size_t>(scenarios.z[0].size(), 1); ++s) {
      const Vector z = scenarios.z[0].empty() ? Vector(model.z_dim(0), 0.0) : scenarios.z[0][s];
      obj = std::max(obj, model.value(0, v, z));
    }
    v.push_back(std::isfinite(obj) && obj < t_hi ? obj + 0.5 * (t_hi - obj) : 0.5 * (t_lo + t_hi));
  }

  int steps = 0;
  if (!(max_h(v) < 0.0)) {
    // Phase I: min s s.t. h_j(v) - s <= 0, s >= -1.
    std::vector<SmoothFn> h1;
    for (const auto& h : hs) {
      h1.push_back({[&h, d](const Vector& w, Vector* g, Matrix* hm) {
        const Vector y(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(d));
        const double val = h.eval(y, g, hm);
        if (g) g->push_back(-1.0);
        if (hm) {
          Matrix e(d + 1, d + 1);
          for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = 0; b < d; ++b) e(a, b) = (*hm)(a, b);
          *hm = std::move(e);
        }
        return val - w[d];
      }});
    }
    h1.push_back({[d](const Vector& w, Vector* g, Matrix* hm) {
      if (g) {
        g->assign(d + 1, 0.0);
        (*g)[d] = -1.0;
      }
      if (hm) *hm = Matrix(d + 1, d + 1);
      return -1.0 - w[d];
    }});
    Vector w = v;
    w.push_back(std::max(max_h(v), 0.0) + 1.0);
    Vector cost(d + 1, 0.0);
    cost[d] = 1.0;
    const BarrierOutcome ph1 = barrier_minimize(
        cost, h1, w, 1e-10, mu, max_newton, [&](const Vector& y) { return y[d] < -1e-6; });
    steps += ph1.steps;
    v.assign(ph1.v.begin(), ph1.v.begin() + static_cast<std::ptrdiff_t>(d));
    if (!(max_h(v) < 0.0))
      fail(ErrorCode::MasterFailure, "scenario problem has no strictly feasible point");
  }
  Vector cost(d, 0.0);
  cost[n] = 1.0;
  const BarrierOutcome ph2 = barrier_minimize(cost, hs, v, tol, mu, max_newton, {});
  steps += ph2.steps;

  MasterResult res;
  res.x.assign(ph2.v.begin(), ph2.v.begin() + static_cast<std::ptrdiff_t>(n));
  double obj = -kInf;
  if (scenarios.z[0].empty()) {
    obj = model.value(0, res.x, Vector(model.z_dim(0), 0.0));
  } else {
    for (const Vector& z : scenarios.z[0]) obj = std::max(obj, model.value(0, res.x, z));
  }
  res.value = obj;
  res.lower_bound = ph2.v[n] - static_cast<double>(hs.size()) / ph2.t;
  res.newton_steps = steps;
  return res;
}

namespace {

ScenarioSet initial_scenarios(const RobustModel& model) {
  ScenarioSet s;
  s.z.resize(model.m() + 1);
  for (std::size_t j = 0; j <= model.m(); ++j) s.z[j].push_back(Vector(model.z_dim(j), 0.0));
  return s;
}

void fill_default(const RobustModel& model, Checkpoint& cp) {
  cp.obj = model.worst_objective(cp.x);
  cp.feas_gap = model.feasibility_gap(cp.x);
}

bool emit(const RobustModel& model, const CheckpointObserver& observer, Checkpoint& cp) {
  if (observer) return observer(cp);
  fill_default(model, cp);
  return false;
}

}  // namespace

Vector nominal_start(const RobustModel& model, const MasterSolver& master) {
  return master.solve(model, initial_scenarios(model), interior_point(model.domain())).x;
}

double lower_bound_from_cuts(const RobustModel& model, const ScenarioSet& scenarios,
                             const MasterSolver& master) {
  require(scenarios.size() > 0, ErrorCode::InvalidArgument, "scenario set is empty");
  return master.solve(model, scenarios, interior_point(model.domain())).lower_bound;
}

CuttingPlaneResult cutting_planes(const RobustModel& model, const CuttingPlaneOptions& opts,
                                  const MasterSolver& master,
                                  const CheckpointObserver& observer) {
  const auto t0 = Clock::now();
  CuttingPlaneResult res;
  res.trace.algorithm = "cutting-planes";
  res.scenarios = initial_scenarios(model);
  const Vector x_int = interior_point(model.domain());
  for (long round = 1; round <= opts.max_rounds; ++round) {
    const MasterResult mr = master.solve(model, res.scenarios, x_int);
    res.lower_bound = std::max(res.lower_bound, mr.lower_bound);
    res.lower_bounds.push_back(res.lower_bound);
    res.scenario_counts.push_back(res.scenarios.size());
    res.trace.iterations = round;
    res.trace.x_avg = mr.x;

    bool added = false;
    for (std::size_t j = 0; j <= model.m(); ++j) {
      if (model.z_dim(j) == 0) continue;
      const Pessimum pz = model.pessimize(j, mr.x);
      const double level = j == 0 ? mr.value : 0.0;
      if (pz.value - level > opts.eps) {
        res.scenarios.z[j].push_back(pz.z);
        added = true;
      }
    }

    Checkpoint cp;
    cp.iter = round;
    cp.elapsed_s = seconds_since(t0);
    cp.x = mr.x;
    const bool stop = emit(model, observer, cp);
    res.trace.checkpoints.push_back(cp);
    if (!added) {
      res.converged = true;
      return res;
    }
    if (stop) {
      res.trace.stopped_early = true;
      return res;
    }
    if (opts.time_budget_s && cp.elapsed_s > *opts.time_budget_s) {
      res.trace.time_budget_exceeded = true;
      return res;
    }
  }
  res.trace.budget_exhausted = true;
  return res;
}

IterTrace fo_pess(const RobustModel& model, ConstVec x0, long budget, const FoPessOptions& opts,
                  const CheckpointObserver& observer) {
  require(x0.size() == model.n(), ErrorCode::DimensionMismatch, "start point dimension");
  require(opts.checkpoint_every > 0, ErrorCode::InvalidArgument, "checkpoint interval");
  const auto t0 = Clock::now();
  IterTrace tr;
  tr.algorithm = "fo-pess";
  Vector x = project_simple(model.domain(), x0);
  ErgodicAccumulator acc;
  for (long k = 1; k <= budget; ++k) {
    double worst = -kInf;
    std::size_t jw = 0;
    Vector zw;
    for (std::size_t j = 1; j <= model.m(); ++j) {
      Pessimum p = model.pessimize(j, x);
      if (p.value > worst) {
        worst = p.value;
        jw = j;
        zw = std::move(p.z);
      }
    }
    const bool objective_step = !(worst > opts.eps);
    if (objective_step) {
      jw = 0;
      zw = model.z_dim(0) > 0 ? model.pessimize(0, x).z : Vector{};
    }
    const Vector g = model.bar_grad_x(jw, x, zw);
    const double gn = norm(g);
    const double sk = std::sqrt(static_cast<double>(k));
    const double step = gn > 0.0 ? opts.base / (gn * sk) : opts.base / sk;
    if (objective_step) acc.add(x, step);
    if (gn > 0.0) {
      axpy(-step, g, x);
      x = project_simple(model.domain(), x);
    }
    tr.iterations = k;
    if (k % opts.checkpoint_every == 0 || k == budget) {
      Checkpoint cp;
      cp.iter = k;
      cp.elapsed_s = seconds_since(t0);
      cp.x = acc.empty() ? x : acc.mean();
      const bool stop = emit(model, observer, cp);
      tr.checkpoints.push_back(cp);
      if (stop) {
        tr.stopped_early = true;
        break;
      }
      if (opts.time_budget_s && cp.elapsed_s > *opts.time_budget_s) {
        tr.time_budget_exceeded = true;
        break;
      }
    }
  }
  tr.x_avg = acc.empty() ? x : acc.mean();
  tr.budget_exhausted = !tr.stopped_early && !tr.time_budget_exceeded;
  return tr;
}

IterTrace oco_ogd(const RobustModel& model, ConstVec x0, long budget, const OcoOptions& opts,
                  const CheckpointObserver& observer) {
  require(x0.size() == model.n(), ErrorCode::DimensionMismatch, "start point dimension");
  require(opts.checkpoint_every > 0 && opts.inner_budget > 0, ErrorCode::InvalidArgument,
          "checkpoint and inner budgets must be positive");
  const auto t0 = Clock::now();
  IterTrace tr;
  tr.algorithm = "oco";
  auto [lo, hi] = model.objective_range();
  const std::size_t mm = model.m();
  const Vector xs = project_simple(model.domain(), x0);
  Vector best;
  long total = 0;
  bool stop = false;
  while (!stop && total < budget && hi - lo > opts.eps) {
    const double tau = 0.5 * (lo + hi);
    Vector x = xs;
    std::vector<Vector> z(mm + 1);
    for (std::size_t j = 0; j <= mm; ++j) z[j].assign(model.z_dim(j), 0.0);
    ErgodicAccumulator acc;
    bool feasible = false;
    Vector xa;
    for (long k = 1; k <= opts.inner_budget && total < budget; ++k) {
      ++total;
      const double sk = std::sqrt(static_cast<double>(k));
      std::size_t jw = 0;
      double lw = model.bar_value(0, x, z[0]) - tau;
      for (std::size_t j = 1; j <= mm; ++j) {
        const double l = model.bar_value(j, x, z[j]);
        if (l > lw) {
          lw = l;
          jw = j;
        }
      }
      const Vector g = model.bar_grad_x(jw, x, z[jw]);
      for (std::size_t j = 0; j <= mm; ++j) {
        if (z[j].empty()) continue;
        const Vector gz = model.bar_grad_z(j, x, z[j]);
        const double gzn = norm(gz);
        if (gzn == 0.0) continue;
        axpy(opts.base / (gzn * sk), gz, z[j]);
        z[j] = model.project_z(j, z[j]);
      }
      const double gn = norm(g);
      if (gn > 0.0) {
        axpy(-opts.base / (gn * sk), g, x);
        x = project_simple(model.domain(), x);
      }
      acc.add(x, 1.0);
      if (k % opts.checkpoint_every == 0 || k == opts.inner_budget || total == budget) {
        xa = acc.mean();
        const double viol = std::max(model.feasibility_gap(xa), model.worst_objective(xa) - tau);
        if (viol <= opts.eps) {
          feasible = true;
          best = xa;
        }
        Checkpoint cp;
        cp.iter = total;
        cp.elapsed_s = seconds_since(t0);
        cp.x = best.empty() ? xa : best;
        stop = emit(model, observer, cp);
        tr.checkpoints.push_back(cp);
        if (opts.time_budget_s && cp.elapsed_s > *opts.time_budget_s) {
          tr.time_budget_exceeded = true;
          stop = true;
        }
        if (feasible || stop) break;
      }
    }
    if (feasible) hi = tau;
    else lo = tau;
  }
  tr.iterations = total;
  tr.stopped_early = stop && !tr.time_budget_exceeded;
  tr.budget_exhausted = total >= budget;
  tr.x_avg = best.empty() ? xs : best;
  return tr;
}

}  // namespace rsp
