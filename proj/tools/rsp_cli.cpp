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

// rsp: generate instances, solve robust problems, debug projections and run
// the robust-QP benchmark.
//
// Exit codes: 0 success, 2 usage or validation error, 3 budget exhausted,
// 4 numerical failure.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "rsp/bench.hpp"
#include "rsp/error.hpp"
#include "rsp/io.hpp"
#include "rsp/papc.hpp"
#include "rsp/sgsp.hpp"

namespace {

using namespace rsp;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;
constexpr int kExitNumerical = 4;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::BudgetExhausted:
    case ErrorCode::TimeBudgetExceeded:
      return kExitBudget;
    case ErrorCode::NoConvergence:
    case ErrorCode::OracleFailure:
    case ErrorCode::MasterFailure:
    case ErrorCode::Unbounded:
      return kExitNumerical;
    default:
      return kExitUsage;
  }
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::IoError, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string resolve(const std::string& workdir, const std::string& path) {
  if (workdir.empty() || path.empty() || std::filesystem::path(path).is_absolute()) return path;
  return (std::filesystem::path(workdir) / path).string();
}

Vector parse_vector(const std::string& s) {
  Vector v;
  std::stringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    try {
      v.push_back(std::stod(tok));
    } catch (const std::exception&) {
      fail(ErrorCode::InvalidArgument, "bad number '" + tok + "'");
    }
  }
  return v;
}

std::string format_vector(ConstVec v) {
  std::string out = "[";
  char buf[64];
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%s%.10g", i ? ", " : "", v[i]);
    out += buf;
  }
  return out + "]";
}

std::uint64_t seed_or_env(const CLI::Option* opt, std::uint64_t value) {
  if (opt->count() > 0) return value;
  if (const char* env = std::getenv("RSP_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      fail(ErrorCode::InvalidArgument, "RSP_SEED is not an integer");
    }
  }
  return value;
}

// Merges `key=value` lines of --config into argv for keys the command line
// does not already set.
std::vector<std::string> merge_config(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  std::string cfg_path, workdir;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) cfg_path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) cfg_path = args[i].substr(9);
    if (args[i] == "--workdir" && i + 1 < args.size()) workdir = args[i + 1];
  }
  std::size_t sub = 1;
  while (sub < args.size() && args[sub] != "gen" && args[sub] != "solve" &&
         args[sub] != "project" && args[sub] != "bench")
    ++sub;
  if (cfg_path.empty() || sub >= args.size() || args[sub] == "bench") return args;
  const auto kv = parse_kv_text(read_text(resolve(workdir, cfg_path)));
  std::vector<std::string> extra;
  for (const auto& [k, v] : kv) {
    const std::string flag = "--" + k;
    bool present = false;
    for (const auto& a : args)
      if (a == flag || a.rfind(flag + "=", 0) == 0) present = true;
    if (!present) {
      extra.push_back(flag);
      extra.push_back(v);
    }
  }
  args.insert(args.begin() + static_cast<std::ptrdiff_t>(sub) + 1, extra.begin(), extra.end());
  return args;
}

// Robust problems

struct SolveSettings {
  std::string algo;
  long budget = 100000;
  double eps = 1e-3;
  long checkpoint_every = 100;
  std::optional<double> time_budget_s;
  std::uint64_t seed = 1;
  double tau_tilde = 1.0;
  double theta_tilde = 10.0;
  double theta_w_tilde = 1.0;
};

bool needs_split(const RobustProblem& p) {
  if (p.domain.kind() == SetKind::Intersection) return true;
  for (const auto& c : p.constraints)
    if (c.zset().kind() == SetKind::Intersection) return true;
  return false;
}

double robust_violation(const RobustProblem& p, ConstVec x) {
  double v = -kInf;
  for (double f : robust_values(p, x)) v = std::max(v, f);
  if (p.r() > 0) {
    Vector res = matvec(p.eq_A, x);
    for (std::size_t i = 0; i < res.size(); ++i) res[i] -= p.eq_b[i];
    v = std::max(v, norm(res));
  }
  v = std::max(v, contains(p.domain, x, 1e-9) ? -kInf : kInf);
  return v;
}

IterTrace solve_problem(const RobustProblem& p, const SolveSettings& s) {
  validate_problem(p);
  const bool split = needs_split(p);
  const SetDescriptor& dom0 = p.domain.kind() == SetKind::Intersection ? p.domain.parts().front()
                                                                       : p.domain;
  Vector x0 = project_simple(dom0, Vector(p.n(), 0.0));

  if (s.algo == "sgsp" || s.algo == "papc") {
    std::optional<DualBounds> bounds;
    try {
      const SlaterSearchResult sr = slater_search(p, x0);
      bounds = dual_bounds(p, sr.cert, uncertainty_radii(p));
      x0 = sr.cert.x_hat;
    } catch (const Error&) {
      if (s.algo == "sgsp") throw;
    }
    if (s.algo == "sgsp") {
      SgspConfig cfg;
      cfg.n_iters = s.budget;
      cfg.steps = StepPolicy::theorem(s.tau_tilde, s.theta_tilde, s.theta_w_tilde);
      cfg.checkpoint_every = s.checkpoint_every;
      cfg.time_budget_s = s.time_budget_s;
      cfg.seed = s.seed;
      cfg.certify = !split && std::isfinite(outer_radius(p.domain));
      if (!split) return sgsp_run(p, *bounds, cfg, initial_state(p, x0));
      LiftedProblem lifted = lift_uncertainty_intersection(lift_domain_intersection(p));
      return sgsp_run_split(lifted, lifted_dual_bounds(lifted, *bounds, x0), cfg,
                            lifted.zero_state(x0));
    }
    require(p.all_biaffine(), ErrorCode::NotBiaffine, "papc requires biaffine constraints");
    PapcConfig cfg;
    cfg.n_iters = s.budget;
    cfg.checkpoint_every = s.checkpoint_every;
    cfg.time_budget_s = s.time_budget_s;
    if (split) {
      LiftedProblem lifted = lift_uncertainty_intersection(lift_domain_intersection(p));
      return papc_run_split(lifted, cfg, lifted.zero_state(x0));
    }
    const SaddleState start = identity_lift(p).zero_state(x0);
    if (bounds) {
      PapcBoundData bd;
      bd.bounds = *bounds;
      bd.radii = uncertainty_radii(p);
      return papc_run(p, cfg, start, &bd);
    }
    return papc_run(p, cfg, start);
  }

  const ProblemModel model(p);
  auto observer = [&model](Checkpoint& cp) {
    cp.obj = model.worst_objective(cp.x);
    cp.feas_gap = model.feasibility_gap(cp.x);
    return false;
  };
  if (s.algo == "cutting-planes") {
    CuttingPlaneOptions co;
    co.eps = s.eps;
    co.max_rounds = s.budget;
    co.time_budget_s = s.time_budget_s;
    CuttingPlaneResult res = cutting_planes(model, co, BarrierMaster{}, observer);
    fill_ogr(res.trace, res.lower_bound, s.eps);
    return res.trace;
  }
  if (s.algo == "fo-pess") {
    FoPessOptions fo;
    fo.eps = s.eps;
    fo.checkpoint_every = s.checkpoint_every;
    fo.time_budget_s = s.time_budget_s;
    return fo_pess(model, x0, s.budget, fo, observer);
  }
  OcoOptions oo;
  oo.eps = s.eps;
  oo.checkpoint_every = s.checkpoint_every;
  oo.time_budget_s = s.time_budget_s;
  return oco_ogd(model, x0, s.budget, oo, observer);
}

int cmd_solve(const std::string& instance_path, const std::string& out_path,
              const SolveSettings& s) {
  const nlohmann::json j = read_json_file(instance_path);
  IterTrace tr;
  double violation = kInf;
  if (j.value("kind", std::string()) == "robust_qp") {
    auto inst = std::make_shared<const QpInstance>(qp_from_json(j));
    require(s.algo != "papc", ErrorCode::NotBiaffine,
            "papc requires biaffine constraints; QP constraints are quadratic in x");
    const Vector x0 = nominal_start(QpModel(inst), BarrierMaster{});
    QpRunOptions o;
    o.iter_budget = s.budget;
    o.eps = s.eps;
    o.checkpoint_every = s.checkpoint_every;
    o.time_budget_s = s.time_budget_s;
    double lb = -kInf;
    if (s.algo != "cutting-planes") run_qp_algorithm("cutting-planes", inst, x0, o, &lb);
    tr = run_qp_algorithm(s.algo, inst, x0, o, s.algo == "cutting-planes" ? &lb : nullptr);
    fill_ogr(tr, lb, s.eps);
    violation = feasibility_gap(*inst, tr.x_avg);
  } else {
    const RobustProblem p = problem_from_json(j);
    tr = solve_problem(p, s);
    violation = robust_violation(p, tr.x_avg);
  }
  if (!out_path.empty()) write_text_file(out_path, trace_to_csv(tr));
  std::printf("algorithm: %s\niterations: %ld\nx: %s\nfeasibility_gap: %.10g\n",
              tr.algorithm.c_str(), tr.iterations, format_vector(tr.x_avg).c_str(), violation);
  if (!tr.checkpoints.empty()) std::printf("objective: %.10g\n", tr.checkpoints.back().obj);
  if (violation <= s.eps) return kExitOk;
  std::fprintf(stderr, "budget exhausted before reaching feasibility gap %g\n", s.eps);
  return kExitBudget;
}

int cmd_gen(std::size_t n, std::size_t K, std::size_t L, std::size_t m, std::uint64_t seed,
            const std::string& out) {
  const QpInstance inst = gen_instance(n, K, L, m, seed);
  write_json_file(out, qp_to_json(inst));
  for (std::size_t i = 0; i <= m; ++i)
    std::printf("block %zu: stacked_norm %.12f b_norm %.12f\n", i, stacked_norm(inst, i),
                norm(inst.b[i]));
  return kExitOk;
}

SetDescriptor parse_set(const std::string& kind, std::size_t dim, double radius,
                        const std::string& lo, const std::string& hi) {
  if (kind == "l2") return SetDescriptor::l2_ball(dim, radius);
  if (kind == "l1") return SetDescriptor::l1_ball(dim, radius);
  if (kind == "linf") return SetDescriptor::linf_ball(dim, radius);
  if (kind == "box") {
    const Vector l = parse_vector(lo), h = parse_vector(hi);
    require(l.size() == dim && h.size() == dim, ErrorCode::DimensionMismatch,
            "box bounds must match the point dimension");
    return SetDescriptor::box(l, h);
  }
  fail(ErrorCode::UnsupportedSet, "unsupported set '" + kind + "'");
}

int cmd_project(const std::string& kind, double radius, const std::string& lo,
                const std::string& hi, const std::string& point, double lambda,
                std::optional<double> cap) {
  const Vector z = parse_vector(point);
  const SetDescriptor s = parse_set(kind, z.size(), radius, lo, hi);
  s.validate();
  const ConeLiftSpec spec{s, cap.value_or(kInf)};
  const ConeProjection pr = project_cone_lift(spec, z, lambda);
  const double kkt = cone_kkt_residual(spec, LiftedPoint{z, lambda}, pr.point);
  std::printf("P_Z: %s\n", format_vector(project_simple(s, z)).c_str());
  std::printf("P_U: z_tilde %s lambda %.10g\n", format_vector(pr.point.z_tilde).c_str(),
              pr.point.lambda);
  std::printf("mu: %.10g\n", pr.mu);
  std::printf("kkt_residual: %.3e\n", kkt);
  return kExitOk;
}

int cmd_bench(const std::string& config, const std::string& out_dir, std::optional<int> jobs) {
  BenchConfig cfg;
  std::map<std::string, std::string> kv;
  if (!config.empty()) kv = parse_kv_text(read_text(config));
  cfg = bench_config_from_kv(kv);
  if (!kv.count("jobs")) cfg.jobs = std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  if (jobs) {
    require(*jobs >= 1, ErrorCode::InvalidArgument, "jobs must be at least 1");
    cfg.jobs = *jobs;
  }
  const BenchResult res = run_bench(cfg);
  for (const auto& c : res.cells) {
    std::printf("%-28s %-15s FG %-12.4g OGR %-12.4g checkpoints_to_feasible %zu%s%s\n",
                c.instance.c_str(), c.algorithm.c_str(), c.final_fg, c.final_ogr,
                c.checkpoints_to_feasible, c.error.empty() ? "" : " error: ", c.error.c_str());
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust saddle-point solvers"};
  app.require_subcommand(1);
  std::string workdir;
  app.add_option("--workdir", workdir, "Base directory for relative paths");

  auto* gen = app.add_subcommand("gen", "Generate a random robust QP instance");
  std::size_t n = 0, K = 0, L = 0, m = 0;
  std::uint64_t gen_seed = 1;
  std::string gen_out;
  gen->add_option("--n", n, "Decision dimension")->required();
  gen->add_option("--K", K, "Uncertainty dimension")->required();
  gen->add_option("--L", L, "Rows per matrix")->required();
  gen->add_option("--m", m, "Number of robust constraints")->required();
  auto* gen_seed_opt = gen->add_option("--seed", gen_seed, "Random seed (default RSP_SEED or 1)");
  gen->add_option("--out", gen_out, "Output file")->required();

  auto* solve = app.add_subcommand("solve", "Solve an instance with one algorithm");
  SolveSettings ss;
  std::string instance, solve_out, solve_config;
  double time_budget = 0.0;
  solve->add_option("--algo", ss.algo, "Algorithm")
      ->required()
      ->check(CLI::IsMember({"sgsp", "papc", "cutting-planes", "fo-pess", "oco"}));
  solve->add_option("--instance", instance, "Instance file")->required();
  solve->add_option("--budget", ss.budget, "Iteration budget")->check(CLI::PositiveNumber);
  solve->add_option("--eps", ss.eps, "Feasibility tolerance")->check(CLI::PositiveNumber);
  solve->add_option("--checkpoint-every", ss.checkpoint_every, "Checkpoint interval")
      ->check(CLI::PositiveNumber);
  solve->add_option("--time-budget", time_budget, "Wall-clock budget in seconds");
  auto* solve_seed_opt = solve->add_option("--seed", ss.seed, "Sampling seed (default RSP_SEED or 1)");
  solve->add_option("--tau-tilde", ss.tau_tilde, "SGSP x step constant")
      ->check(CLI::PositiveNumber);
  solve->add_option("--theta-tilde", ss.theta_tilde, "SGSP multiplier step constant")
      ->check(CLI::PositiveNumber);
  solve->add_option("--theta-w-tilde", ss.theta_w_tilde, "SGSP equality step constant")
      ->check(CLI::PositiveNumber);
  solve->add_option("--out", solve_out, "Trace CSV");
  solve->add_option("--config", solve_config, "key=value file; flags take precedence");

  auto* project = app.add_subcommand("project", "Project a lifted point onto a perspective cone");
  std::string set_kind, lo, hi, point;
  double radius = 1.0, lambda = 0.0, cap = 0.0;
  project->add_option("--set", set_kind, "l2, l1, linf or box")->required();
  project->add_option("--radius", radius, "Ball radius");
  project->add_option("--lo", lo, "Box lower bounds, comma separated");
  project->add_option("--hi", hi, "Box upper bounds, comma separated");
  project->add_option("--point", point, "Point z_tilde, comma separated")->required();
  project->add_option("--lambda", lambda, "Lifted coordinate");
  auto* cap_opt = project->add_option("--lambda-cap", cap, "Cap on lambda");

  auto* bench = app.add_subcommand("bench", "Run the robust-QP benchmark");
  std::string bench_config, bench_out;
  int jobs = 1;
  bench->add_option("--config", bench_config, "key=value benchmark settings");
  bench->add_option("--out-dir", bench_out, "Results directory");
  auto* jobs_opt = bench->add_option("--jobs", jobs, "Parallel instance cap");

  try {
    std::vector<std::string> args = merge_config(argc, argv);
    std::reverse(args.begin(), args.end());
    args.pop_back();
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e.code());
  }

  try {
    if (*gen) return cmd_gen(n, K, L, m, seed_or_env(gen_seed_opt, gen_seed), resolve(workdir, gen_out));
    if (*solve) {
      ss.seed = seed_or_env(solve_seed_opt, ss.seed);
      if (time_budget > 0.0) ss.time_budget_s = time_budget;
      return cmd_solve(resolve(workdir, instance), resolve(workdir, solve_out), ss);
    }
    if (*project)
      return cmd_project(set_kind, radius, lo, hi, point, lambda,
                         cap_opt->count() ? std::optional<double>(cap) : std::nullopt);
    if (*bench)
      return cmd_bench(resolve(workdir, bench_config), resolve(workdir, bench_out),
                       jobs_opt->count() ? std::optional<int>(jobs) : std::nullopt);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumerical;
  }
  return kExitUsage;
}
