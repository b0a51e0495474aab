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

#include "rsp/sgsp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include "rsp/error.hpp"

namespace rsp {

StepPolicy StepPolicy::theorem(double tau_tilde, double theta_tilde, double theta_w_tilde) {
  StepPolicy s;
  s.kind = StepKind::TheoremScaled;
  s.tau_tilde = tau_tilde;
  s.theta_default = theta_tilde;
  s.theta_w_tilde = theta_w_tilde;
  return s;
}

StepPolicy StepPolicy::adaptive(double base) {
  StepPolicy s;
  s.kind = StepKind::AdaptiveNormalized;
  s.base = base;
  return s;
}

double ConvergenceConstants::feasibility_bound(long k) const {
  const double sn = std::sqrt(static_cast<double>(n_iters));
  return prefactor * (dist_feas * sn / static_cast<double>(k) + phi / sn);
}

double ConvergenceConstants::optimality_bound(long k) const {
  const double sn = std::sqrt(static_cast<double>(n_iters));
  return prefactor * (dist_opt * sn / static_cast<double>(k) + phi / sn);
}

namespace {

using Clock = std::chrono::steady_clock;

Vector flat(const LiftedVar& u) {
  Vector v = u.z_tilde;
  v.push_back(u.lambda);
  return v;
}

LiftedVar unflat(ConstVec v) {
  return {Vector(v.begin(), v.end() - 1), v.back()};
}

Vector flat(const OmegaPoint& w) {
  Vector v = w.nu;
  v.push_back(w.mu);
  return v;
}

OmegaPoint unflat_omega(ConstVec v) {
  return {Vector(v.begin(), v.end() - 1), v.back()};
}

double sq(double v) { return v * v; }

void check_steps(const StepPolicy& s, std::size_t m) {
  if (s.kind == StepKind::TheoremScaled) {
    require(s.tau_tilde > 0.0 && s.theta_w_tilde > 0.0, ErrorCode::InvalidSteps,
            "step constants must be positive");
    for (std::size_t i = 0; i < m; ++i)
      require(s.theta(i) > 0.0, ErrorCode::InvalidSteps, "step constants must be positive");
  } else {
    require(s.base > 0.0, ErrorCode::InvalidSteps, "adaptive base must be positive");
  }
}

Vector project_w(ConstVec w, double radius) {
  const double nw = norm(w);
  if (nw <= radius) return Vector(w.begin(), w.end());
  return scaled(radius / nw, w);
}

void default_measure(const RobustProblem& p, ConstVec x, Checkpoint& cp) {
  cp.obj = dot(p.c, x);
  bool can = true;
  for (const auto& c : p.constraints) can = can && c.can_pessimize();
  cp.feas_gap = can ? feasibility_measure(p, x) : kNaN;
}

struct EngineOptions {
  ConvergenceConstants* constants = nullptr;
  const char* name = "sgsp";
};

IterTrace run_engine(const LiftedProblem& L, const DualBounds& bounds, const SgspConfig& cfg,
                     const SaddleState& start, const CheckpointObserver& observer,
                     const EngineOptions& opt) {
  const RobustProblem& p = L.base;
  const std::size_t n = p.n();
  const std::size_t m = p.m();
  const std::size_t r = p.r();
  require(cfg.n_iters >= 1, ErrorCode::InvalidArgument, "n_iters must be at least 1");
  require(cfg.checkpoint_every >= 1, ErrorCode::InvalidArgument,
          "checkpoint_every must be at least 1");
  check_steps(cfg.steps, m);
  require(start.x.size() == n, ErrorCode::DimensionMismatch, "start x dimension");
  require(start.u.size() == L.u_blocks(), ErrorCode::DimensionMismatch, "start u blocks");
  require(start.omega.size() == L.omega_blocks(), ErrorCode::DimensionMismatch,
          "start omega blocks");
  require(start.w.empty() || start.w.size() == r, ErrorCode::DimensionMismatch,
          "start w dimension");
  require(p.domain.is_projectable(), ErrorCode::UnsupportedSet,
          "the domain must be a simple set or a product of simple sets");

  const double w_radius = bounds.r_w + 1.0;
  std::vector<ConeLiftSpec> cones;
  std::vector<std::size_t> owner;  // constraint of each u block
  for (std::size_t i = 0; i < m; ++i)
    for (const auto& f : L.factors[i]) {
      cones.push_back({f, bounds.lambda_bar});
      owner.push_back(i);
    }
  std::vector<OmegaSpec> omega_specs;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t l = 0; l + 1 < L.splits(i); ++l) omega_specs.push_back(L.omega_specs[i][l]);

  SaddleState s;
  s.x = project_simple(p.domain, start.x);
  for (std::size_t b = 0; b < cones.size(); ++b)
    s.u.push_back(project_cone_lift(cones[b], start.u[b].z_tilde, start.u[b].lambda).point);
  s.w = start.w.empty() ? Vector(r, 0.0) : project_w(start.w, w_radius);
  for (std::size_t b = 0; b < omega_specs.size(); ++b)
    s.omega.push_back(project_omega(omega_specs[b], start.omega[b].nu, start.omega[b].mu));

  ErgodicAccumulator xacc, wacc;
  std::vector<ErgodicAccumulator> uacc(cones.size()), oacc(omega_specs.size());

  const long N = cfg.n_iters;
  const double sqrtN = std::sqrt(static_cast<double>(N));
  const StepPolicy& sp = cfg.steps;
  double max_vx = 0.0;
  Vector max_vu(m, 0.0);

  IterTrace trace;
  trace.algorithm = opt.name;
  const auto t0 = Clock::now();

  std::vector<Vector> vu(cones.size());
  std::vector<Vector> vo(omega_specs.size());
  Vector theta(m);

  auto make_checkpoint = [&](long k) {
    Checkpoint cp;
    cp.iter = k;
    cp.elapsed_s = std::chrono::duration<double>(Clock::now() - t0).count();
    const Vector xl = xacc.mean();
    cp.x = L.recover_x(xl);
    bool stop = false;
    if (observer) {
      stop = observer(cp);
    } else {
      default_measure(p, xl, cp);
    }
    if (opt.constants) {
      raise_constants(*opt.constants, cfg, max_vx, max_vu);
      cp.cert_bound = opt.constants->feasibility_bound(k);
    }
    trace.checkpoints.push_back(std::move(cp));
    return stop;
  };

  long k = 1;
  for (; k <= N; ++k) {
    // Subgradients at the current state; every block reads the same state.
    Vector vx = p.c;
    if (r > 0) {
      const Vector atw = matvec_t(p.eq_A, s.w);
      axpy(1.0, atw, vx);
    }
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t uo = L.u_offset(i);
      const std::size_t oo = L.omega_offset(i);
      const std::size_t si = L.splits(i);
      const LiftedVar& last = s.u[uo + si - 1];
      PerspectiveSubgrad sg = perspective_subgrad(p.constraints[i], s.x, last);
      axpy(1.0, sg.dx, vx);
      Vector& v_last = vu[uo + si - 1];
      v_last = std::move(sg.du);
      const Vector flast = flat(last);
      for (std::size_t l = 0; l + 1 < si; ++l) {
        const Vector fo = flat(s.omega[oo + l]);
        vu[uo + l] = scaled(-1.0, fo);
        axpy(1.0, fo, v_last);
        vo[oo + l] = sub(flat(s.u[uo + l]), flast);
      }
    }
    Vector vw;
    if (r > 0) vw = sub(matvec(p.eq_A, s.x), p.eq_b);

    // Step sizes.
    double tau = 0.0, theta_w = 0.0;
    const double sk = std::sqrt(static_cast<double>(k));
    double nx2 = dot(vx, vx);
    for (const auto& v : vo) nx2 += dot(v, v);
    max_vx = std::max(max_vx, std::sqrt(dot(vx, vx)));
    for (std::size_t i = 0; i < m; ++i) {
      double nu2 = 0.0;
      const std::size_t uo = L.u_offset(i);
      for (std::size_t l = 0; l < L.splits(i); ++l) nu2 += dot(vu[uo + l], vu[uo + l]);
      max_vu[i] = std::max(max_vu[i], std::sqrt(nu2));
      if (sp.kind == StepKind::TheoremScaled) {
        theta[i] = sp.theta(i) / sqrtN;
      } else {
        theta[i] = nu2 > 0.0 ? sp.base / (std::sqrt(nu2) * sk) : sp.base / sk;
      }
    }
    if (sp.kind == StepKind::TheoremScaled) {
      tau = sp.tau_tilde / sqrtN;
      theta_w = sp.theta_w_tilde / sqrtN;
    } else {
      tau = nx2 > 0.0 ? sp.base / (std::sqrt(nx2) * sk) : sp.base / sk;
      const double nw = r > 0 ? norm(vw) : 0.0;
      theta_w = nw > 0.0 ? sp.base / (nw * sk) : sp.base / sk;
    }

    // Updates.
    axpy(-tau, vx, s.x);
    s.x = project_simple(p.domain, s.x);
    for (std::size_t b = 0; b < omega_specs.size(); ++b) {
      Vector fo = flat(s.omega[b]);
      axpy(-tau, vo[b], fo);
      s.omega[b] = project_omega(omega_specs[b], std::span<const double>(fo).first(fo.size() - 1),
                                 fo.back());
    }
    for (std::size_t b = 0; b < cones.size(); ++b) {
      Vector fu = flat(s.u[b]);
      axpy(-theta[owner[b]], vu[b], fu);
      s.u[b] = project_cone_lift(cones[b], std::span<const double>(fu).first(fu.size() - 1),
                                 fu.back())
                   .point;
    }
    if (r > 0) {
      axpy(theta_w, vw, s.w);
      s.w = project_w(s.w, w_radius);
    }

    const bool uniform = cfg.averaging == Averaging::Uniform;
    xacc.add(s.x, uniform ? 1.0 : tau);
    for (std::size_t b = 0; b < cones.size(); ++b)
      uacc[b].add(flat(s.u[b]), uniform ? 1.0 : theta[owner[b]]);
    for (std::size_t b = 0; b < omega_specs.size(); ++b)
      oacc[b].add(flat(s.omega[b]), uniform ? 1.0 : tau);
    if (r > 0) wacc.add(s.w, uniform ? 1.0 : theta_w);

    const bool timed_out =
        cfg.time_budget_s &&
        std::chrono::duration<double>(Clock::now() - t0).count() > *cfg.time_budget_s;
    if (k % cfg.checkpoint_every == 0 || k == N || timed_out) {
      if (make_checkpoint(k)) {
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
  trace.last = s;
  trace.average.x = xacc.mean();
  for (auto& a : uacc) trace.average.u.push_back(unflat(a.mean()));
  for (auto& a : oacc) trace.average.omega.push_back(unflat_omega(a.mean()));
  trace.average.w = r > 0 ? wacc.mean() : Vector{};
  trace.x_avg = L.recover_x(trace.average.x);
  return trace;
}

}  // namespace

SaddleState initial_state(const RobustProblem& p, ConstVec x0) {
  return identity_lift(p).zero_state(x0);
}

CheckpointObserver default_observer(const RobustProblem& p) {
  return [&p](Checkpoint& cp) {
    default_measure(p, cp.x, cp);
    return false;
  };
}

ConvergenceConstants estimate_constants(const RobustProblem& p, const DualBounds& bounds,
                                        const SgspConfig& cfg, const SaddleState& start) {
  const std::size_t m = p.m();
  const std::size_t r = p.r();
  const double rx = outer_radius(p.domain);
  require(std::isfinite(rx), ErrorCode::Unbounded, "the bound needs a bounded domain");
  ConvergenceConstants k;
  k.n_iters = cfg.n_iters;
  k.G.assign(m, 0.0);
  k.sigma.resize(m);
  double smax = 2.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double ri = outer_radius(p.constraints[i].zset());
    k.sigma[i] = 1.0 + 4.0 * ri * ri;
    smax = std::max(smax, k.sigma[i]);
  }
  k.prefactor = smax / 2.0;
  k.G_w = r > 0 ? spectral_norm(p.eq_A) * rx + norm(p.eq_b) : 0.0;

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const SetDescriptor wball = SetDescriptor::l2_ball(std::max<std::size_t>(r, 1), bounds.r_w + 1.0);
  for (int t = 0; t < cfg.constant_samples; ++t) {
    const Vector x = sample_point(p.domain, rng);
    Vector vx = p.c;
    if (r > 0) {
      Vector w = sample_point(wball, rng);
      w.resize(r);
      axpy(1.0, matvec_t(p.eq_A, w), vx);
    }
    for (std::size_t i = 0; i < m; ++i) {
      const double lam = bounds.lambda_bar * unit(rng);
      const Vector z = sample_point(p.constraints[i].zset(), rng);
      const PerspectiveSubgrad sg = perspective_subgrad(p.constraints[i], x, {scaled(lam, z), lam});
      axpy(1.0, sg.dx, vx);
      k.G[i] = std::max(k.G[i], norm(sg.du));
    }
    k.G_x = std::max(k.G_x, norm(vx));
  }

  const StepPolicy& sp = cfg.steps;
  const double x0 = norm(start.x);
  k.dist_feas = 2.0 * std::max(x0 * x0, rx * rx) / sp.tau_tilde;
  k.dist_opt = k.dist_feas;
  for (std::size_t i = 0; i < m; ++i) {
    const double l0 = i < start.u.size() ? start.u[i].lambda : 0.0;
    k.dist_feas += sq(std::max(bounds.lambda_bar + 1.0, l0)) / sp.theta(i);
    k.dist_opt += sq(std::max(2.0 * bounds.lambda_bar, l0)) / sp.theta(i);
  }
  if (r > 0) {
    const double w0 = norm(start.w);
    k.dist_feas += sq(std::max(bounds.r_w + 1.0, w0)) / sp.theta_w_tilde;
    k.dist_opt += sq(std::max(2.0 * bounds.r_w, w0)) / sp.theta_w_tilde;
  }
  raise_constants(k, cfg, 0.0, Vector(m, 0.0));
  return k;
}

void raise_constants(ConvergenceConstants& k, const SgspConfig& cfg, double g_x, ConstVec g_u) {
  k.G_x = std::max(k.G_x, g_x);
  for (std::size_t i = 0; i < k.G.size() && i < g_u.size(); ++i) k.G[i] = std::max(k.G[i], g_u[i]);
  const StepPolicy& sp = cfg.steps;
  k.phi = sp.tau_tilde * k.G_x * k.G_x + sp.theta_w_tilde * k.G_w * k.G_w;
  for (std::size_t i = 0; i < k.G.size(); ++i) k.phi += sp.theta(i) * k.G[i] * k.G[i];
}

IterTrace sgsp_run(const RobustProblem& p, const DualBounds& bounds, const SgspConfig& cfg,
                   const SaddleState& start, const CheckpointObserver& observer) {
  const LiftedProblem L = identity_lift(p);
  EngineOptions opt;
  std::optional<ConvergenceConstants> consts;
  if (cfg.certify && cfg.steps.kind == StepKind::TheoremScaled &&
      std::isfinite(outer_radius(p.domain))) {
    consts = estimate_constants(p, bounds, cfg, start);
    opt.constants = &*consts;
  }
  return run_engine(L, bounds, cfg, start, observer, opt);
}

IterTrace sgsp_run_split(const LiftedProblem& lifted, const DualBounds& bounds,
                         const SgspConfig& cfg, const SaddleState& start,
                         const CheckpointObserver& observer) {
  EngineOptions opt;
  opt.name = "sgsp-split";
  return run_engine(lifted, bounds, cfg, start, observer, opt);
}

DualBounds lifted_dual_bounds(const LiftedProblem& lifted, const DualBounds& original,
                              ConstVec x_hat) {
  if (lifted.x_copies == 1) return original;
  const Vector x = lifted.zero_state(x_hat).x;
  return dual_bounds(lifted.base, make_certificate(lifted.base, x),
                     uncertainty_radii(lifted.base));
}

Certificate certify(const IterTrace& trace, const RobustProblem& p,
                    const ConvergenceConstants& consts) {
  require(trace.iterations >= 1, ErrorCode::InvalidArgument, "empty trace");
  Certificate c;
  c.measured = feasibility_measure(p, trace.x_avg);
  c.bound = consts.feasibility_bound(trace.iterations);
  c.opt_bound = consts.optimality_bound(trace.iterations);
  c.holds = c.measured <= c.bound;
  return c;
}

SlaterSearchResult slater_search(const RobustProblem& p, ConstVec x0, double delta, long budget,
                                 std::optional<double> v_lower) {
  require(delta > 0.0, ErrorCode::InvalidArgument, "delta must be positive");
  require(x0.size() == p.n(), ErrorCode::DimensionMismatch, "start point dimension");
  require(contains(p.domain, x0, 1e-9), ErrorCode::InvalidArgument, "start point outside X");
  if (p.r() > 0)
    require(norm(sub(matvec(p.eq_A, x0), p.eq_b)) <= 1e-8 * (1.0 + norm(p.eq_b)),
            ErrorCode::InvalidArgument, "start point violates A x = b");

  SlaterSearchResult res;
  Vector f0 = robust_values(p, x0);
  const auto maxf = [](const Vector& f) {
    return f.empty() ? -kInf : *std::max_element(f.begin(), f.end());
  };
  if (maxf(f0) < 0.0) {
    res.cert = make_certificate(p, x0, v_lower);
    return res;
  }

  const std::size_t n = p.n();
  const std::size_t m = p.m();
  double t_bar = maxf(f0) + delta;
  Vector x_ref(x0.begin(), x0.end());  // max_i f_i(x_ref) <= t_bar - delta
  Vector x(x0.begin(), x0.end());
  double t = t_bar;
  std::vector<LiftedVar> u;
  Vector w;
  long K = 2;
  long used = 0;
  for (int round = 1;; ++round) {
    require(used + K <= budget, ErrorCode::BudgetExhausted,
            "no strictly feasible point found within the iteration budget");
    RobustProblem aux;
    aux.c.assign(n + 1, 0.0);
    aux.c[n] = 1.0;
    aux.domain = SetDescriptor::product({p.domain, SetDescriptor::box({-1.0}, {t_bar})});
    for (const auto& c : p.constraints) aux.constraints.push_back(extend_with_t(c, {}, -1.0));
    if (p.r() > 0) {
      aux.eq_A = Matrix(p.r(), n + 1);
      for (std::size_t i = 0; i < p.r(); ++i)
        for (std::size_t j = 0; j < n; ++j) aux.eq_A(i, j) = p.eq_A(i, j);
      aux.eq_b = p.eq_b;
    }
    // Slater point of the auxiliary problem: (x_ref, t_bar - delta / 2).
    SlaterCertificate cert;
    cert.x_hat = x_ref;
    cert.x_hat.push_back(t_bar - 0.5 * delta);
    cert.f_hat = robust_values(aux, cert.x_hat);
    cert.v_lower = -1.0 - delta;
    cert.eps_hat = p.r() > 0 ? estimate_eps_hat(aux, cert.x_hat) : 0.0;
    if (p.r() > 0 && cert.eps_hat <= 0.0) cert.eps_hat = 0.5 * delta;
    const DualBounds b = dual_bounds(aux, cert, uncertainty_radii(aux));

    SgspConfig cfg;
    cfg.n_iters = K;
    cfg.steps = StepPolicy::adaptive();
    cfg.checkpoint_every = K;
    cfg.certify = false;
    SaddleState st = initial_state(aux, Vector(n + 1, 0.0));
    st.x = x;
    st.x.push_back(std::min(t, t_bar));
    if (!u.empty()) st.u = u;
    if (!w.empty()) st.w = w;
    const IterTrace tr = sgsp_run(aux, b, cfg, st, [](Checkpoint&) { return false; });
    used += K;
    res.iterations = used;
    res.rounds = round;

    x.assign(tr.x_avg.begin(), tr.x_avg.begin() + static_cast<std::ptrdiff_t>(n));
    x = project_simple(p.domain, x);
    const Vector fk = robust_values(p, x);
    const double tk = maxf(fk);
    if (tk < 0.0) {
      res.cert = make_certificate(p, x, v_lower);
      return res;
    }
    if (tk + delta < t_bar) {
      t_bar = tk + delta;
      x_ref = x;
    }
    t = tk;
    u = tr.average.u;
    w = tr.average.w;
    K *= 2;
    (void)m;
  }
}

}  // namespace rsp
