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

#include "rsp/papc.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "rsp/error.hpp"

namespace rsp {

std::size_t CompiledBiaffine::u_dim() const {
  std::size_t s = 0;
  for (std::size_t i = 0; i < m(); ++i) s += splits[i] * block_dim(i);
  return s;
}

std::size_t CompiledBiaffine::omega_dim() const {
  std::size_t s = 0;
  for (std::size_t i = 0; i < m(); ++i) s += (splits[i] - 1) * block_dim(i);
  return s;
}

Vector CompiledBiaffine::apply(ConstVec y) const {
  require(y.size() == y_dim(), ErrorCode::DimensionMismatch, "y dimension");
  Vector out(chi_dim(), 0.0);
  std::span<double> x(out.data(), n);
  std::size_t uo = 0;
  std::size_t oo = n;
  for (std::size_t i = 0; i < m(); ++i) {
    const std::size_t db = block_dim(i);
    const std::size_t s = splits[i];
    const ConstVec last = y.subspan(uo + (s - 1) * db, db);
    const Vector qu = matvec(Qt[i], last);
    axpy(1.0, qu, x);
    for (std::size_t l = 0; l + 1 < s; ++l) {
      const ConstVec ul = y.subspan(uo + l * db, db);
      for (std::size_t j = 0; j < db; ++j) out[oo + j] = ul[j] - last[j];
      oo += db;
    }
    uo += s * db;
  }
  if (r() > 0) {
    const Vector atw = matvec_t(A, y.subspan(uo, r()));
    axpy(1.0, atw, x);
  }
  axpy(1.0, y.subspan(uo + r(), n), x);
  return out;
}

Vector CompiledBiaffine::apply_t(ConstVec chi) const {
  require(chi.size() == chi_dim(), ErrorCode::DimensionMismatch, "chi dimension");
  Vector out(y_dim(), 0.0);
  const ConstVec x = chi.first(n);
  std::size_t uo = 0;
  std::size_t oo = n;
  for (std::size_t i = 0; i < m(); ++i) {
    const std::size_t db = block_dim(i);
    const std::size_t s = splits[i];
    const Vector qx = matvec_t(Qt[i], x);
    double* last = out.data() + uo + (s - 1) * db;
    for (std::size_t j = 0; j < db; ++j) last[j] = qx[j];
    for (std::size_t l = 0; l + 1 < s; ++l) {
      for (std::size_t j = 0; j < db; ++j) {
        out[uo + l * db + j] = chi[oo + j];
        last[j] -= chi[oo + j];
      }
      oo += db;
    }
    uo += s * db;
  }
  if (r() > 0) {
    const Vector ax = matvec(A, x);
    std::copy(ax.begin(), ax.end(), out.begin() + static_cast<std::ptrdiff_t>(uo));
  }
  std::copy(x.begin(), x.end(), out.begin() + static_cast<std::ptrdiff_t>(uo + r()));
  return out;
}

Matrix CompiledBiaffine::dense() const {
  const std::size_t rows = chi_dim();
  const std::size_t cols = y_dim();
  Matrix out(rows, cols);
  Vector e(cols, 0.0);
  for (std::size_t j = 0; j < cols; ++j) {
    e[j] = 1.0;
    const Vector col = apply(e);
    for (std::size_t i = 0; i < rows; ++i) out(i, j) = col[i];
    e[j] = 0.0;
  }
  return out;
}

namespace {

CompiledBiaffine compile_core(const RobustProblem& p, std::vector<std::size_t> splits) {
  CompiledBiaffine cb;
  cb.n = p.n();
  cb.c = p.c;
  for (const auto& con : p.constraints) {
    require(con.is_biaffine(), ErrorCode::NotBiaffine, "every constraint must be biaffine");
    const BiaffineConstraint& b = con.biaffine_data();
    Matrix qt(cb.n, b.z_dim() + 1);
    for (std::size_t i = 0; i < cb.n; ++i) {
      for (std::size_t j = 0; j < b.z_dim(); ++j) qt(i, j) = b.Q(i, j);
      qt(i, b.z_dim()) = b.d[i];
    }
    Vector q = b.q;
    q.push_back(b.gamma);
    cb.Qt.push_back(std::move(qt));
    cb.qt.push_back(std::move(q));
  }
  cb.A = p.eq_A;
  cb.b = p.eq_b;
  cb.splits = std::move(splits);
  return cb;
}

}  // namespace

CompiledBiaffine compile_biaffine(const RobustProblem& p) {
  return compile_core(p, std::vector<std::size_t>(p.m(), 1));
}

CompiledBiaffine compile_biaffine(const LiftedProblem& lifted) {
  std::vector<std::size_t> s;
  for (const auto& f : lifted.factors) s.push_back(f.size());
  return compile_core(lifted.base, std::move(s));
}

namespace {

// theta for every y coordinate.
Vector theta_vector(const CompiledBiaffine& cb, const PapcConfig& cfg) {
  Vector th;
  th.reserve(cb.y_dim());
  for (std::size_t i = 0; i < cb.m(); ++i)
    th.insert(th.end(), cb.splits[i] * cb.block_dim(i), cfg.theta(i));
  th.insert(th.end(), cb.r(), cfg.theta_w);
  th.insert(th.end(), cb.n, cfg.theta_pi);
  return th;
}

}  // namespace

double step_operator_norm(const CompiledBiaffine& cb, const PapcConfig& cfg) {
  const Vector th = theta_vector(cb, cfg);
  for (double t : th)
    require(t > 0.0, ErrorCode::InvalidSteps, "dual step sizes must be positive");
  // Same nonzero spectrum as Qbar Theta Qbar^T on chi-space.
  LinearOp op = [&](ConstVec v, std::span<double> out) {
    Vector y = cb.apply_t(v);
    for (std::size_t j = 0; j < y.size(); ++j) y[j] *= th[j];
    const Vector q = cb.apply(y);
    std::copy(q.begin(), q.end(), out.begin());
  };
  return power_iteration(op, cb.chi_dim(), 1e-8, 20000).value;
}

bool validate_steps(const CompiledBiaffine& cb, const PapcConfig& cfg) {
  if (!(cfg.tau > 0.0)) return false;
  return cfg.tau * step_operator_norm(cb, cfg) <= 1.0 - cfg.margin;
}

PapcConfig with_default_steps(const CompiledBiaffine& cb, PapcConfig cfg) {
  if (cfg.tau <= 0.0) {
    const double lmax = step_operator_norm(cb, cfg);
    cfg.tau = (1.0 - cfg.margin) / lmax * (1.0 - 1e-9);
  }
  return cfg;
}

double papc_measure(const RobustProblem& p, ConstVec x) {
  double s = 0.0;
  for (const auto& c : p.constraints) s += std::max(c.pessimize(x).value, 0.0);
  if (p.r() > 0) s += norm(sub(matvec(p.eq_A, x), p.eq_b));
  s += dist(x, project_simple(p.domain, x));
  return s;
}

double papc_feasibility_bound(const CompiledBiaffine& cb, const PapcConfig& cfg,
                              const SetDescriptor& x_set, const SaddleState& start,
                              const PapcBoundData& data, long k) {
  const DualBounds& b = data.bounds;
  const double x0 = norm(start.x.empty() ? Vector{} : Vector(start.x.begin(),
                                                               start.x.begin() + static_cast<std::ptrdiff_t>(cb.n)));
  const double dx = data.x_star_dist ? *data.x_star_dist : outer_radius(x_set) + x0;
  double total = dx * dx / cfg.tau;
  std::size_t ub = 0;
  double mu_term = 0.0;
  for (std::size_t i = 0; i < cb.m(); ++i) {
    double sigma = 0.0;
    for (std::size_t l = 0; l < cb.splits[i]; ++l) {
      const double ril = ub + l < data.radii.size() ? data.radii[ub + l] : 0.0;
      sigma += 1.0 + 4.0 * ril * ril;
    }
    const std::size_t last = ub + cb.splits[i] - 1;
    const double l0 = last < start.u.size() ? start.u[last].lambda : 0.0;
    const double lam = std::max(b.lambda_bar + 1.0, l0);
    total += 2.0 * sigma * lam * lam / cfg.theta(i);
    if (cb.splits[i] > 1) {
      const double mb = data.mu_bar.at(i);
      const double e = data.eps.at(i);
      mu_term += static_cast<double>(cb.splits[i]) * mb * mb * (1.0 + 1.0 / e) * (1.0 + 1.0 / e);
    }
    ub += cb.splits[i];
  }
  if (cb.r() > 0) {
    const double w = std::max(b.r_w + 1.0, norm(start.w));
    total += 2.0 * w * w / cfg.theta_w;
  }
  const double pi0 = norm(start.pi);
  const double phi =
      std::max(2.0 / cfg.theta_pi, 4.0 * mu_term + 2.0 * pi0 * pi0 / cfg.theta_pi);
  const double beta = b.r_pi;
  total += phi * (1.0 + (1.0 + beta) * (1.0 + beta));
  return total / (2.0 * static_cast<double>(k));
}

IterTrace papc_run(const CompiledBiaffine& cb, const std::vector<SetDescriptor>& u_bases,
                   const SetDescriptor& x_set, const PapcConfig& cfg, const SaddleState& start,
                   const CheckpointObserver& observer, const PapcBoundData* bound_data) {
  using Clock = std::chrono::steady_clock;
  const std::size_t n = cb.n;
  const std::size_t r = cb.r();
  require(cfg.n_iters >= 1 && cfg.checkpoint_every >= 1, ErrorCode::InvalidArgument,
          "iteration counts must be positive");
  require(validate_steps(cb, cfg), ErrorCode::InvalidSteps,
          "step sizes violate S - tau Qbar^T Qbar > 0");
  std::size_t nblocks = 0;
  for (std::size_t i = 0; i < cb.m(); ++i) nblocks += cb.splits[i];
  require(u_bases.size() == nblocks, ErrorCode::DimensionMismatch, "one base set per u block");
  require(start.x.size() == n, ErrorCode::DimensionMismatch, "start x dimension");
  require(start.u.size() == nblocks, ErrorCode::DimensionMismatch, "start u blocks");
  require(start.omega.size() * 1 <= nblocks, ErrorCode::DimensionMismatch, "start omega blocks");

  // Flat state.
  Vector chi(cb.chi_dim(), 0.0);
  Vector y(cb.y_dim(), 0.0);
  std::copy(start.x.begin(), start.x.end(), chi.begin());
  {
    std::size_t off = n;
    for (const auto& om : start.omega) {
      std::copy(om.nu.begin(), om.nu.end(), chi.begin() + static_cast<std::ptrdiff_t>(off));
      chi[off + om.nu.size()] = om.mu;
      off += om.nu.size() + 1;
    }
    require(off == cb.chi_dim(), ErrorCode::DimensionMismatch, "start omega dimension");
    off = 0;
    for (const auto& u : start.u) {
      std::copy(u.z_tilde.begin(), u.z_tilde.end(), y.begin() + static_cast<std::ptrdiff_t>(off));
      y[off + u.z_tilde.size()] = u.lambda;
      off += u.z_tilde.size() + 1;
    }
    require(off == cb.u_dim(), ErrorCode::DimensionMismatch, "start u dimension");
    if (!start.w.empty()) {
      require(start.w.size() == r, ErrorCode::DimensionMismatch, "start w dimension");
      std::copy(start.w.begin(), start.w.end(), y.begin() + static_cast<std::ptrdiff_t>(off));
    }
    if (!start.pi.empty()) {
      require(start.pi.size() == n, ErrorCode::DimensionMismatch, "start pi dimension");
      std::copy(start.pi.begin(), start.pi.end(),
                y.begin() + static_cast<std::ptrdiff_t>(off + r));
    }
  }
  Vector c_chi(cb.chi_dim(), 0.0);
  std::copy(cb.c.begin(), cb.c.end(), c_chi.begin());

  std::vector<ConeLiftSpec> cones;
  std::vector<std::size_t> owner, block_off;
  {
    std::size_t off = 0, b = 0;
    for (std::size_t i = 0; i < cb.m(); ++i)
      for (std::size_t l = 0; l < cb.splits[i]; ++l, ++b) {
        cones.push_back({u_bases[b], kInf});
        owner.push_back(i);
        block_off.push_back(off);
        off += cb.block_dim(i);
      }
  }
  const std::size_t w_off = cb.u_dim();
  const std::size_t pi_off = w_off + r;

  SaddleState first;
  first.x = start.x;
  ErgodicAccumulator chi_acc, y_acc;
  IterTrace trace;
  trace.algorithm = "papc";
  const auto t0 = Clock::now();

  auto unpack = [&](ConstVec cv, ConstVec yv) {
    SaddleState s;
    s.x.assign(cv.begin(), cv.begin() + static_cast<std::ptrdiff_t>(n));
    std::size_t off = n;
    for (std::size_t i = 0; i < cb.m(); ++i)
      for (std::size_t l = 0; l + 1 < cb.splits[i]; ++l) {
        const std::size_t db = cb.block_dim(i);
        s.omega.push_back({Vector(cv.begin() + static_cast<std::ptrdiff_t>(off),
                                  cv.begin() + static_cast<std::ptrdiff_t>(off + db - 1)),
                           cv[off + db - 1]});
        off += db;
      }
    for (std::size_t b = 0; b < cones.size(); ++b) {
      const std::size_t db = cb.block_dim(owner[b]);
      const std::size_t o = block_off[b];
      s.u.push_back({Vector(yv.begin() + static_cast<std::ptrdiff_t>(o),
                            yv.begin() + static_cast<std::ptrdiff_t>(o + db - 1)),
                     yv[o + db - 1]});
    }
    s.w.assign(yv.begin() + static_cast<std::ptrdiff_t>(w_off),
               yv.begin() + static_cast<std::ptrdiff_t>(pi_off));
    s.pi.assign(yv.begin() + static_cast<std::ptrdiff_t>(pi_off), yv.end());
    return s;
  };

  const long N = cfg.n_iters;
  long k = 1;
  for (; k <= N; ++k) {
    // Predictor.
    Vector g = cb.apply(y);
    axpy(1.0, c_chi, g);
    Vector p = chi;
    axpy(-cfg.tau, g, p);
    const Vector qp = cb.apply_t(p);
    // Dual updates.
    for (std::size_t b = 0; b < cones.size(); ++b) {
      const std::size_t i = owner[b];
      const std::size_t db = cb.block_dim(i);
      const std::size_t o = block_off[b];
      const double th = cfg.theta(i);
      const bool last = (b + 1 == cones.size()) || owner[b + 1] != i;
      Vector v(db);
      for (std::size_t j = 0; j < db; ++j) {
        double dir = qp[o + j];
        if (last) dir += cb.qt[i][j];
        v[j] = y[o + j] + th * dir;
      }
      const ConeProjection pr =
          project_cone_lift(cones[b], std::span<const double>(v).first(db - 1), v[db - 1]);
      std::copy(pr.point.z_tilde.begin(), pr.point.z_tilde.end(),
                y.begin() + static_cast<std::ptrdiff_t>(o));
      y[o + db - 1] = pr.point.lambda;
    }
    for (std::size_t j = 0; j < r; ++j) y[w_off + j] += cfg.theta_w * (qp[w_off + j] - cb.b[j]);
    {
      Vector pv(n);
      for (std::size_t j = 0; j < n; ++j) pv[j] = y[pi_off + j] + cfg.theta_pi * qp[pi_off + j];
      const Vector pr = prox_support(x_set, cfg.theta_pi, pv);
      std::copy(pr.begin(), pr.end(), y.begin() + static_cast<std::ptrdiff_t>(pi_off));
    }
    // Corrector.
    Vector g2 = cb.apply(y);
    axpy(1.0, c_chi, g2);
    axpy(-cfg.tau, g2, chi);

    chi_acc.add(chi, 1.0);
    y_acc.add(y, 1.0);

    const bool timed_out =
        cfg.time_budget_s &&
        std::chrono::duration<double>(Clock::now() - t0).count() > *cfg.time_budget_s;
    if (k % cfg.checkpoint_every == 0 || k == N || timed_out) {
      Checkpoint cp;
      cp.iter = k;
      cp.elapsed_s = std::chrono::duration<double>(Clock::now() - t0).count();
      const Vector cm = chi_acc.mean();
      cp.x.assign(cm.begin(), cm.begin() + static_cast<std::ptrdiff_t>(n));
      if (bound_data) cp.cert_bound = papc_feasibility_bound(cb, cfg, x_set, start, *bound_data, k);
      const bool stop = observer ? observer(cp) : false;
      trace.checkpoints.push_back(std::move(cp));
      if (stop) {
        trace.stopped_early = true;
        break;
      }
    }
    if (timed_out) {
      trace.time_budget_exceeded = true;
      break;
    }
  }
  trace.iterations = std::min(k, N);
  trace.last = unpack(chi, y);
  trace.average = unpack(chi_acc.mean(), y_acc.mean());
  trace.x_avg = trace.average.x;
  return trace;
}

namespace {

CheckpointObserver measure_on(const RobustProblem& p) {
  return [&p](Checkpoint& cp) {
    cp.obj = dot(p.c, cp.x);
    cp.feas_gap = papc_measure(p, cp.x);
    return false;
  };
}

}  // namespace

IterTrace papc_run(const RobustProblem& p, const PapcConfig& cfg, const SaddleState& start,
                   const PapcBoundData* bound_data, const CheckpointObserver& observer) {
  const CompiledBiaffine cb = compile_biaffine(p);
  const PapcConfig c2 = with_default_steps(cb, cfg);
  std::vector<SetDescriptor> bases;
  for (const auto& con : p.constraints) bases.push_back(con.zset());
  return papc_run(cb, bases, p.domain, c2, start, observer ? observer : measure_on(p),
                  bound_data);
}

IterTrace papc_run_split(const LiftedProblem& lifted, const PapcConfig& cfg,
                         const SaddleState& start, const CheckpointObserver& observer) {
  const CompiledBiaffine cb = compile_biaffine(lifted);
  const PapcConfig c2 = with_default_steps(cb, cfg);
  std::vector<SetDescriptor> bases;
  for (const auto& f : lifted.factors) bases.insert(bases.end(), f.begin(), f.end());
  const RobustProblem& p = lifted.base;
  CheckpointObserver obs = [&](Checkpoint& cp) {
    const Vector xl = cp.x;
    cp.x = lifted.recover_x(xl);
    if (observer) return observer(cp);
    cp.obj = dot(p.c, xl);
    cp.feas_gap = papc_measure(p, xl);
    return false;
  };
  IterTrace t = papc_run(cb, bases, p.domain, c2, start, obs, nullptr);
  t.algorithm = "papc-split";
  t.x_avg = lifted.recover_x(t.average.x);
  return t;
}

}  // namespace rsp
