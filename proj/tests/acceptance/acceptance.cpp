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

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "rsp/baselines.hpp"
#include "rsp/bench.hpp"
#include "rsp/error.hpp"
#include "rsp/papc.hpp"
#include "rsp/perspective.hpp"
#include "rsp/qp.hpp"
#include "rsp/sgsp.hpp"
#include "rsp/splitting.hpp"

using namespace rsp;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Vector gauss(std::mt19937_64& rng, std::size_t n, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Vector v(n);
  for (double& x : v) x = g(rng);
  return v;
}

double unif(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Vector random_unit_ball(std::mt19937_64& rng, std::size_t n) {
  Vector v = gauss(rng, n);
  return scaled(std::pow(unif(rng, 0.0, 1.0), 1.0 / static_cast<double>(n)) / norm(v), v);
}

Matrix random_sym(std::mt19937_64& rng, std::size_t k) {
  Matrix a(k, k);
  std::normal_distribution<double> g(0.0, 1.0);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j <= i; ++j) a(i, j) = a(j, i) = g(rng);
  return a;
}

SetDescriptor family_set(int family, std::size_t d, std::mt19937_64& rng) {
  const double r = unif(rng, 0.3, 2.0);
  switch (family) {
    case 0: return SetDescriptor::l2_ball(d, r);
    case 1: return SetDescriptor::l1_ball(d, r);
    case 2: return SetDescriptor::linf_ball(d, r);
    default: {
      Vector lo(d), hi(d);
      for (std::size_t j = 0; j < d; ++j) {
        lo[j] = -unif(rng, 0.1, 2.0);
        hi[j] = unif(rng, 0.1, 2.0);
      }
      return SetDescriptor::box(lo, hi);
    }
  }
}

double lifted_dist(const Vector& z, double lam, const LiftedPoint& p) {
  const double dl = lam - p.lambda;
  return std::sqrt(std::pow(dist(z, p.z_tilde), 2) + dl * dl);
}

double psi(const SetDescriptor& s, const Vector& z, double lam, double mu) {
  const Vector pz = project_simple(s, scaled(1.0 / mu, z));
  return mu * dot(pz, pz) - dot(z, pz) + mu - lam;
}

Outcome c1_projection_optimality() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(101);
  const char* names[] = {"l2", "l1", "linf", "box"};
  double worst_margin = -kInf, worst_psi = 0.0;
  std::string where;
  for (int family = 0; family < 4; ++family) {
    for (int t = 0; t < 1000; ++t) {
      const std::size_t d = 2 + t % 4;
      const SetDescriptor s = family_set(family, d, rng);
      const Vector z = gauss(rng, d, 2.0);
      const double lam = unif(rng, -2.0, 2.0);
      const ConeProjection pr = project_cone_lift(ConeLiftSpec{s}, z, lam, 1e-13);
      const double dp = lifted_dist(z, lam, pr.point);
      for (int c = 0; c < 1000; ++c) {
        double cl;
        Vector cz;
        if (c % 2 == 0 || pr.point.lambda <= 0.0) {
          cl = unif(rng, 0.0, 3.0);
          cz = scaled(cl, project_simple(s, gauss(rng, d, 1.5)));
        } else {
          cl = std::max(0.0, pr.point.lambda + unif(rng, -0.05, 0.05));
          Vector base = scaled(1.0 / pr.point.lambda, pr.point.z_tilde);
          axpy(1.0, gauss(rng, d, 0.05), base);
          cz = scaled(cl, project_simple(s, base));
        }
        const double margin = dp - lifted_dist(z, lam, LiftedPoint{cz, cl});
        if (margin > worst_margin) {
          worst_margin = margin;
          where = names[family];
        }
      }
      const bool inside = lam > 0.0 && contains(s, scaled(1.0 / lam, z), 0.0);
      const bool polar = support(s, z) <= -lam;
      if (!inside && !polar && pr.mu > 0.0)
        worst_psi = std::max(worst_psi, std::abs(psi(s, z, lam, pr.mu)));
    }
  }
  const double el = seconds_since(t0);
  const bool pass = worst_margin <= 1e-6 && worst_psi <= 1e-8 && el < 30.0;
  return {pass, "max(d(proj) - d(candidate)) " + fmt("%.2e", worst_margin) + " (" + where +
                    "), max|psi| " + fmt("%.2e", worst_psi) + ", " + fmt("%.1f s", el)};
}

Outcome c2_closed_form() {
  std::mt19937_64 rng(102);
  double worst = 0.0;
  int valid = 0;
  for (int family = 0; family < 3; ++family) {
    int count = 0;
    for (int attempt = 0; count < 1000 && attempt < 100000; ++attempt) {
      const std::size_t d = 2 + attempt % 5;
      const SetDescriptor s = family_set(family, d, rng);
      const Vector z = gauss(rng, d, 2.0);
      const double lam = unif(rng, -1.5, 1.5);
      const auto cf = closed_form_mu(s, z, lam);
      if (!cf) continue;
      const double root = scalar_root_mu(s, z, lam, 1e-14, 400);
      worst = std::max(worst, std::abs(*cf - root) / std::max(1.0, std::abs(root)));
      ++count;
    }
    valid += count;
  }
  return {worst <= 1e-8 && valid == 3000,
          fmt("%.0f inputs", valid) + ", max rel diff " + fmt("%.2e", worst)};
}

Outcome c3_moreau() {
  std::mt19937_64 rng(103);
  double worst = 0.0, worst_opt = -kInf;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t d = 2 + t % 5;
    const SetDescriptor x = family_set(t % 4, d, rng);
    const double th = unif(rng, 0.05, 3.0);
    const Vector y = gauss(rng, d, 3.0);
    const Vector p = prox_support(x, th, y);
    Vector rec = p;
    axpy(th, project_simple(x, scaled(1.0 / th, y)), rec);
    worst = std::max(worst, dist(rec, y) / std::max(1.0, norm(y)));
    // p minimizes theta sigma_X(v) + ||v - y||^2 / 2.
    auto obj = [&](const Vector& v) { return th * support(x, v) + 0.5 * std::pow(dist(v, y), 2); };
    const double best = obj(p);
    for (int c = 0; c < 20; ++c) {
      Vector v = p;
      axpy(1.0, gauss(rng, d, 0.1), v);
      worst_opt = std::max(worst_opt, best - obj(v));
    }
  }
  return {worst <= 1e-12 && worst_opt <= 1e-12,
          "max reconstruction error " + fmt("%.2e", worst) + ", prox objective excess " +
              fmt("%.2e", worst_opt)};
}

Constraint smooth_oracle(const Matrix& a, const Vector& b) {
  GeneralOracle g;
  g.eval = [a, b](ConstVec x, ConstVec z) {
    return dot(x, x) + dot(x, matvec(a, z)) - 0.5 * dot(z, z) + dot(b, z);
  };
  g.subgrad_x = [a](ConstVec x, ConstVec z) {
    Vector s = matvec(a, z);
    axpy(2.0, x, s);
    return s;
  };
  g.subgrad_negz = [a, b](ConstVec x, ConstVec z) {
    Vector s = matvec_t(a, x);
    axpy(-1.0, z, s);
    axpy(1.0, b, s);
    return scaled(-1.0, s);
  };
  return Constraint::general(a.rows(), g, SetDescriptor::l2_ball(a.cols(), 1.0));
}

Outcome c4_perspective_fd() {
  std::mt19937_64 rng(104);
  const std::size_t n = 4, d = 3;
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    Matrix a(n, d);
    for (double& v : a.data()) v = gauss(rng, 1)[0];
    const Constraint c = smooth_oracle(a, gauss(rng, d));
    const Vector x = gauss(rng, n);
    const Vector zt = gauss(rng, d);
    const double lam = unif(rng, 0.2, 2.0);
    const PerspectiveSubgrad s = perspective_subgrad(c, x, LiftedVar{zt, lam});
    const Vector fdx = oracles::central_difference(
        [&](const Vector& y) { return perspective_value(c, y, LiftedVar{zt, lam}); }, x);
    Vector uv = zt;
    uv.push_back(lam);
    const Vector fdu = oracles::central_difference(
        [&](const Vector& w) {
          return -perspective_value(c, x, LiftedVar{Vector(w.begin(), w.begin() + d), w[d]});
        },
        uv);
    worst = std::max({worst, dist(s.dx, fdx) / std::max(1.0, norm(fdx)),
                      dist(s.du, fdu) / std::max(1.0, norm(fdu))});
  }
  return {worst <= 1e-4, "max relative error " + fmt("%.2e", worst)};
}

struct Prepared {
  DualBounds bounds;
  Vector x_hat;
};

Prepared prepare(const RobustProblem& p) {
  const SlaterSearchResult sr = slater_search(p, Vector(p.n(), 0.0));
  return {dual_bounds(p, sr.cert, uncertainty_radii(p)), sr.cert.x_hat};
}

SgspConfig lp_config(long n) {
  SgspConfig cfg;
  cfg.n_iters = n;
  cfg.steps = StepPolicy::theorem(1.0, 10.0, 1.0);
  cfg.checkpoint_every = n / 20;
  return cfg;
}

Outcome c5_sgsp_lp() {
  bool pass = true;
  std::string detail;
  double total = 0.0;
  const std::pair<const char*, std::pair<RobustProblem, double>> cases[] = {
      {"lp_1d", {fixtures::lp_1d(), 1.0}},
      {"lp_2d", {fixtures::lp_2d(), -2.0 * fixtures::lp_2d_t()}}};
  for (const auto& [name, c] : cases) {
    const auto& [p, opt] = c;
    const auto t0 = Clock::now();
    const Prepared pr = prepare(p);
    const SgspConfig cfg = lp_config(100000);
    const SaddleState start = initial_state(p, pr.x_hat);
    const IterTrace tr = sgsp_run(p, pr.bounds, cfg, start, default_observer(p));
    total += seconds_since(t0);
    bool cert_ok = !tr.checkpoints.empty();
    for (const auto& cp : tr.checkpoints) cert_ok = cert_ok && cp.feas_gap <= cp.cert_bound;
    const Checkpoint& last = tr.checkpoints.back();
    const double err = std::abs(last.obj - opt);
    const Certificate cert = certify(tr, p, estimate_constants(p, pr.bounds, cfg, start));
    pass = pass && cert_ok && cert.holds && last.feas_gap <= 1e-3 && err <= 1e-2;
    detail += std::string(name) + ": FG " + fmt("%.2e", last.feas_gap) + " err " +
              fmt("%.2e", err) + (cert_ok && cert.holds ? " cert ok; " : " cert violated; ");
  }
  pass = pass && total < 60.0;
  return {pass, detail + fmt("%.1f s", total)};
}

Outcome c6_sgsp_rate() {
  const RobustProblem p = fixtures::lp_1d();
  const Prepared pr = prepare(p);
  std::vector<double> gaps;
  for (long n : {1000L, 4000L, 16000L}) {
    SgspConfig cfg = lp_config(n);
    cfg.certify = false;
    const IterTrace tr = sgsp_run(p, pr.bounds, cfg, initial_state(p, pr.x_hat), default_observer(p));
    const Checkpoint& cp = tr.checkpoints.back();
    gaps.push_back(std::abs(cp.obj - 1.0) + cp.feas_gap);
  }
  const double r1 = gaps[0] / gaps[1], r2 = gaps[1] / gaps[2];
  return {r1 >= 1.6 && r2 >= 1.6,
          "reduction per 4x N: " + fmt("%.2f", r1) + ", " + fmt("%.2f", r2)};
}

Outcome c7_papc() {
  const RobustProblem p = fixtures::papc_toy();
  const SlaterSearchResult sr = slater_search(p, Vector{0.0});
  PapcBoundData bd;
  bd.bounds = dual_bounds(p, sr.cert, uncertainty_radii(p));
  bd.radii = uncertainty_radii(p);
  bool cert_ok = true;
  double err_1e4 = kInf;
  std::vector<double> scaled_gaps;
  for (long n : {1000L, 10000L, 100000L}) {
    PapcConfig cfg;
    cfg.n_iters = n;
    cfg.checkpoint_every = n / 10;
    const IterTrace tr = papc_run(p, cfg, identity_lift(p).zero_state(Vector{0.0}), &bd);
    for (const auto& cp : tr.checkpoints) cert_ok = cert_ok && cp.feas_gap <= cp.cert_bound;
    const Checkpoint& last = tr.checkpoints.back();
    scaled_gaps.push_back((std::abs(last.obj + 0.5) + last.feas_gap) * static_cast<double>(n));
    if (n == 10000) err_1e4 = std::abs(tr.x_avg[0] - 0.5);
  }
  const double hi = *std::max_element(scaled_gaps.begin(), scaled_gaps.end());
  const bool bounded = hi <= 2.0 * scaled_gaps[0];
  return {cert_ok && err_1e4 <= 1e-3 && bounded,
          "|x - x*| at 1e4 " + fmt("%.2e", err_1e4) + ", N*gap " + fmt("%.3f", scaled_gaps[0]) +
              " / " + fmt("%.3f", scaled_gaps[1]) + " / " + fmt("%.3f", scaled_gaps[2]) +
              (cert_ok ? ", cert ok" : ", cert violated")};
}

Outcome c8_splitting() {
  const ProblemModel direct(fixtures::budgeted_lp_enumerated());
  CuttingPlaneOptions co;
  co.eps = 1e-9;
  const CuttingPlaneResult cp = cutting_planes(direct, co, BarrierMaster{});
  const Vector ref = cp.trace.x_avg;

  const RobustProblem p = fixtures::budgeted_lp();
  const LiftedProblem l = lift_uncertainty_intersection(p);
  const SlaterSearchResult sr = slater_search(p, Vector{0.0, 0.0});
  const DualBounds bounds = dual_bounds(p, sr.cert, uncertainty_radii(p));
  SgspConfig cfg;
  cfg.n_iters = 400000;
  cfg.checkpoint_every = cfg.n_iters;
  cfg.certify = false;
  const IterTrace s = sgsp_run_split(l, bounds, cfg, l.zero_state(sr.cert.x_hat));
  PapcConfig pc;
  pc.n_iters = 10000;
  const IterTrace a = papc_run_split(l, pc, l.zero_state(Vector{0.0, 0.0}));
  const double es = dist(s.x_avg, ref), ea = dist(a.x_avg, ref);

  // One split per set reproduces the unsplit runs.
  const RobustProblem q = fixtures::lp_2d();
  const Prepared pr = prepare(q);
  SgspConfig dc = lp_config(5000);
  dc.certify = false;
  const LiftedProblem id = identity_lift(q);
  const double ds = dist(sgsp_run(q, pr.bounds, dc, initial_state(q, pr.x_hat)).x_avg,
                         sgsp_run_split(id, pr.bounds, dc, id.zero_state(pr.x_hat)).x_avg);
  PapcConfig dp;
  dp.n_iters = 3000;
  const double da = dist(papc_run(q, dp, id.zero_state(Vector{0.0, 0.0})).x_avg,
                         papc_run_split(id, dp, id.zero_state(Vector{0.0, 0.0})).x_avg);
  return {cp.converged && es <= 1e-3 && ea <= 1e-3 && ds <= 1e-12 && da <= 1e-12,
          "direct x (" + fmt("%.6f", ref[0]) + ", " + fmt("%.6f", ref[1]) + "), sgsp-split " +
              fmt("%.2e", es) + ", papc-split " + fmt("%.2e", ea) + ", s=1 diffs " +
              fmt("%.1e", ds) + " / " + fmt("%.1e", da)};
}

Outcome c9_trs() {
  std::mt19937_64 rng(109);
  double worst_kkt = 0.0;
  bool conditions = true;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t k = 1 + t % 10;
    Matrix m = random_sym(rng, k);
    const double top = lambda_max(m);
    for (std::size_t j = 0; j < k; ++j) m(j, j) -= top;
    const Vector r = gauss(rng, k, t % 3 == 0 ? 0.01 : 1.0);
    const TrsResult res = trs_solve(m, r, 0.0);
    Vector v = matvec(m, res.z);
    axpy(-res.sigma, res.z, v);
    axpy(1.0, r, v);
    worst_kkt = std::max(worst_kkt, norm(v));
    conditions = conditions && res.sigma >= 0.0 && norm(res.z) <= 1.0 + 1e-10 &&
                 res.sigma * std::abs(norm(res.z) - 1.0) <= 1e-8;
  }
  double worst_grid = 0.0;
  bool above = true;
  for (int t = 0; t < 9; ++t) {
    const std::size_t k = 1 + t % 3;
    Matrix m = random_sym(rng, k);
    const double top = lambda_max(m);
    for (std::size_t j = 0; j < k; ++j) m(j, j) -= top;
    const Vector r = gauss(rng, k);
    const TrsResult res = trs_solve(m, r, 0.3);
    auto f = [&](const Vector& z) { return dot(z, matvec(m, z)) + 2.0 * dot(r, z) + 0.3; };
    const double grid = k == 1   ? oracles::ball_grid_max(f, 1, 1.0, 200000, 1)
                        : k == 2 ? oracles::ball_grid_max(f, 2, 1.0, 500, 2000)
                                 : oracles::ball_grid_max(f, 3, 1.0, 60, 400);
    above = above && res.value >= grid - 1e-12;
    worst_grid = std::max(worst_grid, res.value - grid);
  }
  return {worst_kkt <= 1e-8 && conditions && above && worst_grid <= 1e-4,
          "max KKT residual " + fmt("%.2e", worst_kkt) + ", max value - grid " +
              fmt("%.2e", worst_grid)};
}

Outcome c10_sup_equivalence() {
  std::mt19937_64 rng(110);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t k = 1 + t % 3;
    const QpInstance inst = gen_instance(4, k, 3, 1, 500 + t);
    const Vector x = random_unit_ball(rng, 4);
    const std::size_t i = t % 2;
    const double bar = trs_solve(concavify(inst, i, x)).value;
    auto g = [&](const Vector& z) { return qp_value(inst, i, x, z); };
    const double grid = k == 1   ? oracles::ball_grid_max(g, 1, 1.0, 20000, 1)
                        : k == 2 ? oracles::ball_grid_max(g, 2, 1.0, 200, 720)
                                 : oracles::ball_grid_max(g, 3, 1.0, 30, 60);
    worst = std::max(worst, std::abs(bar - grid));
  }
  return {worst <= 1e-3, "max |sup g-bar - grid sup g| " + fmt("%.2e", worst)};
}

struct BenchOutcomes {
  Outcome c11;
  BenchResult result;
};

BenchOutcomes c11_bench() {
  BenchConfig cfg;
  cfg.n = {10};
  cfg.K = 10;
  cfg.L = 10;
  cfg.m = {0, 3};
  cfg.seeds = {1, 2, 3, 4, 5};
  cfg.algorithms = {"sgsp", "cutting-planes", "fo-pess"};
  cfg.run.iter_budget = 20000;
  cfg.run.time_budget_s = 600.0;
  const auto t0 = Clock::now();
  BenchResult res = run_bench(cfg);
  const double el = seconds_since(t0);

  bool all_feasible = true, no_errors = true;
  std::map<std::string, std::map<std::string, std::size_t>> to_feas;
  std::map<std::size_t, std::map<std::string, std::pair<double, int>>> ogr;
  for (const CellResult& c : res.cells) {
    no_errors = no_errors && c.error.empty();
    all_feasible = all_feasible && c.checkpoints_to_feasible > 0;
    to_feas[c.instance][c.algorithm] = c.checkpoints_to_feasible;
    if (!c.minima.empty()) {
      auto& acc = ogr[c.m][c.algorithm];
      acc.first += c.minima.back().min_ogr;
      acc.second += 1;
    }
  }
  int cp_fewest = 0, instances = 0;
  std::string losses;
  for (const auto& [inst, per] : to_feas) {
    ++instances;
    const std::size_t cp = per.at("cutting-planes");
    bool fewest = cp > 0;
    for (const auto& [algo, k] : per)
      if (algo != "cutting-planes" && k > 0 && k < cp) fewest = false;
    cp_fewest += fewest;
    if (!fewest)
      losses += " " + inst + " cp/sgsp/fo " + std::to_string(cp) + "/" +
                std::to_string(per.at("sgsp")) + "/" + std::to_string(per.at("fo-pess")) + ";";
  }
  bool sgsp_better = true;
  std::string ogr_detail;
  for (const auto& [m, per] : ogr) {
    const double s = per.at("sgsp").first / per.at("sgsp").second;
    const double f = per.at("fo-pess").first / per.at("fo-pess").second;
    sgsp_better = sgsp_better && s <= f;
    ogr_detail += " m=" + std::to_string(m) + ": sgsp " + fmt("%.3g", s) + " fo-pess " +
                  fmt("%.3g", f) + ";";
  }
  const bool a = no_errors && all_feasible;
  const bool b = cp_fewest == instances;
  const bool c = sgsp_better;
  std::string detail = std::string("(a) every cell reaches FG <= 1e-3: ") + (a ? "yes" : "no") +
                       "; (b) cutting planes fewest checkpoints on " + std::to_string(cp_fewest) +
                       "/" + std::to_string(instances) + " instances" + losses + " (c) mean running-min OGR" +
                       ogr_detail + " " + fmt("%.1f s", el);
  return {{a && b && c, detail}, std::move(res)};
}

Outcome c12_slater() {
  bool pass = true;
  std::string detail;
  const std::pair<const char*, RobustProblem> feasible[] = {
      {"lp_1d", fixtures::lp_1d()},       {"lp_2d", fixtures::lp_2d()},
      {"papc_toy", fixtures::papc_toy()}, {"budgeted_lp", fixtures::budgeted_lp()},
      {"slater_lp", fixtures::slater_lp(-2.0, 2.0)}};
  for (const auto& [name, p] : feasible) {
    const SlaterSearchResult r = slater_search(p, Vector(p.n(), 0.0));
    const Vector f = robust_values(p, r.cert.x_hat);
    const double worst = f.empty() ? -kInf : *std::max_element(f.begin(), f.end());
    pass = pass && worst < 0.0;
    detail += std::string(name) + " max f " + fmt("%.3f", worst) + "; ";
  }
  const auto t0 = Clock::now();
  bool exhausted = false;
  try {
    slater_search(fixtures::slater_lp(1.0, 2.0), Vector{1.5}, 1e-2, 20000);
  } catch (const Error& e) {
    exhausted = e.code() == ErrorCode::BudgetExhausted;
  }
  const double el = seconds_since(t0);
  pass = pass && exhausted;
  return {pass, detail + "infeasible: " + (exhausted ? "BudgetExhausted" : "no error") + " in " +
                    fmt("%.2f s", el)};
}

Outcome c13_cutting_planes(const BenchResult& bench) {
  bool monotone = true, growing = true, bounded = true;
  int checked = 0, instances = 0;
  std::mt19937_64 rng(113);
  for (std::size_t m : {0, 3})
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      auto inst = std::make_shared<const QpInstance>(gen_instance(10, 10, 10, m, seed));
      const CuttingPlaneResult r = cutting_planes(QpModel(inst), {}, BarrierMaster{});
      ++instances;
      for (std::size_t k = 1; k < r.lower_bounds.size(); ++k) {
        monotone = monotone && r.lower_bounds[k] >= r.lower_bounds[k - 1];
        growing = growing && r.scenario_counts[k] > r.scenario_counts[k - 1];
      }
      std::vector<Vector> points;
      for (int t = 0; t < 200; ++t) points.push_back(random_unit_ball(rng, 10));
      const std::string name = "n10_K10_L10_m" + std::to_string(m) + "_s" + std::to_string(seed);
      for (const CellResult& c : bench.cells)
        if (c.instance == name)
          for (const Checkpoint& cp : c.trace.checkpoints) points.push_back(cp.x);
      for (const Vector& x : points) {
        if (x.size() != 10 || norm(x) > 1.0 || feasibility_gap(*inst, x) > 0.0) continue;
        ++checked;
        bounded = bounded && worst_objective(*inst, x) >= r.lower_bound;
      }
    }
  return {monotone && growing && bounded && checked > 0,
          std::to_string(instances) + " instances, LB nondecreasing " + (monotone ? "yes" : "no") +
              ", scenario counts increasing " + (growing ? "yes" : "no") + ", LB <= " +
              std::to_string(checked) + " feasible worst-case objectives " +
              (bounded ? "yes" : "no")};
}

Outcome guarded(const std::function<Outcome()>& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    return {false, std::string("exception: ") + e.what()};
  }
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int id, const char* title, const Outcome& o) {
    std::printf("%s criterion %d: %s: %s\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str());
    std::fflush(stdout);
    failures += !o.pass;
  };
  report(1, "lifted-cone projections beat feasible candidates", guarded(c1_projection_optimality));
  report(2, "closed-form roots match bisection", guarded(c2_closed_form));
  report(3, "Moreau reconstruction of the support prox", guarded(c3_moreau));
  report(4, "perspective subgradients match finite differences", guarded(c4_perspective_fd));
  report(5, "SGSP solves the robust LP fixtures", guarded(c5_sgsp_lp));
  report(6, "SGSP square-root rate", guarded(c6_sgsp_rate));
  report(7, "PAPC accuracy, 1/N rate and certificate", guarded(c7_papc));
  report(8, "split solvers match the direct solve", guarded(c8_splitting));
  report(9, "trust-region solver", guarded(c9_trs));
  report(10, "concavified sup equals the original sup", guarded(c10_sup_equivalence));
  BenchResult bench;
  report(11, "robust-QP benchmark", guarded([&] {
           BenchOutcomes b = c11_bench();
           bench = std::move(b.result);
           return b.c11;
         }));
  report(12, "Slater search", guarded(c12_slater));
  report(13, "cutting-plane bounds", guarded([&] { return c13_cutting_planes(bench); }));
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
