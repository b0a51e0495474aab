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

#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "rsp/baselines.hpp"
#include "rsp/error.hpp"
#include "rsp/qp.hpp"

using namespace rsp;

namespace {

Vector random_vec(std::mt19937_64& rng, std::size_t n, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Vector v(n);
  for (double& x : v) x = g(rng);
  return v;
}

Vector random_unit_ball(std::mt19937_64& rng, std::size_t n) {
  Vector v = random_vec(rng, n);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return scaled(std::pow(u(rng), 1.0 / static_cast<double>(n)) / norm(v), v);
}

Matrix random_sym(std::mt19937_64& rng, std::size_t k) {
  Matrix a(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j <= i; ++j) a(i, j) = a(j, i) = random_vec(rng, 1)[0];
  return a;
}

double trs_residual(const Matrix& m, ConstVec r, const TrsResult& t) {
  Vector v = matvec(m, t.z);
  axpy(-t.sigma, t.z, v);
  axpy(1.0, r, v);
  return norm(v);
}

}  // namespace

TEST_CASE("instance generation is deterministic and normalized") {
  const QpInstance a = gen_instance(6, 3, 4, 2, 7);
  const QpInstance b = gen_instance(6, 3, 4, 2, 7);
  const QpInstance c = gen_instance(6, 3, 4, 2, 8);
  CHECK(a.P == b.P);
  CHECK(a.b == b.b);
  CHECK(a.P != c.P);
  for (std::size_t i = 0; i <= a.m; ++i) {
    CHECK(std::abs(stacked_norm(a, i) - 1.0) <= 1e-8);
    CHECK(std::abs(norm(a.b[i]) - 1.0) <= 1e-8);
    CHECK(a.c[i] == -0.05);
    // Independent check of the stacked spectral norm.
    Matrix st(a.L * (a.K + 1), a.n);
    for (std::size_t k = 0; k <= a.K; ++k)
      for (std::size_t r = 0; r < a.L; ++r)
        for (std::size_t j = 0; j < a.n; ++j) st(k * a.L + r, j) = a.P[i][k](r, j);
    const Vector sv = oracles::jacobi_singular_values(st);
    CHECK(*std::max_element(sv.begin(), sv.end()) == doctest::Approx(1.0).epsilon(1e-8));
  }
  const QpInstance s = gen_instance(1, 1, 1, 0, 3);
  const double p0 = s.P[0][0](0, 0), p1 = s.P[0][1](0, 0);
  CHECK(std::hypot(p0, p1) == doctest::Approx(1.0));
  CHECK(std::abs(s.b[0][0]) == doctest::Approx(1.0));
  const QpInstance r = qp_from_json(nlohmann::json::parse(qp_to_json(a).dump()));
  CHECK(r.P == a.P);
  CHECK(r.b == a.b);
  CHECK(r.c == a.c);
  CHECK(r.seed == 7);
}

TEST_CASE("qp value matches the matrix form") {
  const QpInstance inst = gen_instance(5, 3, 4, 1, 2);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    const Vector x = random_unit_ball(rng, 5), z = random_unit_ball(rng, 3);
    const Vector ax = matvec(inst.a_of_z(1, z), x);
    CHECK(qp_value(inst, 1, x, z) == doctest::Approx(dot(ax, ax) + dot(inst.b[1], x) - 0.05));
    const Vector fd = oracles::central_difference(
        [&](const Vector& y) { return qp_value(inst, 1, y, z); }, x);
    CHECK(dist(qp_grad_x(inst, 1, x, z), fd) <= 1e-6);
  }
}

TEST_CASE("largest eigenvalue") {
  Matrix d(3, 3);
  d(0, 0) = 1;
  d(1, 1) = 2;
  d(2, 2) = 3;
  CHECK(lambda_max(d) == doctest::Approx(3.0).epsilon(1e-9));
  const Vector q{1, -2, 0.5};
  Matrix qq(3, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) qq(i, j) = q[i] * q[j];
  CHECK(lambda_max(qq) == doctest::Approx(dot(q, q)).epsilon(1e-9));
  std::mt19937_64 rng(4);
  for (int t = 0; t < 50; ++t) {
    const Matrix a = random_sym(rng, 8);
    const Vector ev = oracles::jacobi_eigenvalues(a);
    const double ref = *std::max_element(ev.begin(), ev.end());
    const EigenPair p = lambda_max_pair(a);
    CHECK(std::abs(p.value - ref) <= 1e-8 * std::max(1.0, std::abs(ref)));
    Vector res = matvec(a, p.vector);
    axpy(-p.value, p.vector, res);
    CHECK(norm(res) <= 1e-6);
  }
}

TEST_CASE("concavification") {
  const QpInstance one = gen_instance(1, 1, 1, 0, 5);
  const Vector x{0.7};
  const ConcaveQuadratic cq = concavify(one, 0, x);
  const double a2 = cq.shift;
  CHECK(cq.M(0, 0) == doctest::Approx(0.0).scale(1.0));
  const double direct = std::max({qp_value(one, 0, x, Vector{1.0}), qp_value(one, 0, x, Vector{-1.0})});
  CHECK(a2 + 2.0 * std::abs(cq.r[0]) + (cq.s - cq.shift) == doctest::Approx(direct));
  CHECK(trs_solve(cq).value == doctest::Approx(direct));

  // Zero argument: Q = 0, r = 0, max = c.
  const QpInstance inst = gen_instance(4, 3, 3, 1, 9);
  const ConcaveQuadratic z0 = concavify(inst, 1, Vector(4, 0.0));
  CHECK(z0.shift == doctest::Approx(0.0).scale(1.0));
  CHECK(norm(z0.r) == 0.0);
  CHECK(z0.s == doctest::Approx(-0.05));
  CHECK(trs_solve(z0).value == doctest::Approx(-0.05));

  std::mt19937_64 rng(10);
  for (int t = 0; t < 20; ++t) {
    const Vector xv = random_unit_ball(rng, 4);
    const ConcaveQuadratic c = concavify(inst, 1, xv);
    CHECK(lambda_max(c.M) <= 1e-8);
    // On the unit sphere g-bar and g coincide.
    Vector zs = random_vec(rng, 3);
    zs = scaled(1.0 / norm(zs), zs);
    CHECK(c.value(zs) == doctest::Approx(qp_value(inst, 1, xv, zs)));
    CHECK(qp_bar_value(inst, 1, xv, zs) == doctest::Approx(qp_value(inst, 1, xv, zs)));
    // Inside the ball g-bar dominates g.
    const Vector zi = scaled(0.5, zs);
    CHECK(qp_bar_value(inst, 1, xv, zi) >= qp_value(inst, 1, xv, zi) - 1e-12);
  }
}

TEST_CASE("concavified gradients match finite differences") {
  const QpInstance inst = gen_instance(4, 3, 3, 1, 12);
  std::mt19937_64 rng(13);
  for (int t = 0; t < 20; ++t) {
    const Vector x = random_unit_ball(rng, 4), z = random_unit_ball(rng, 3);
    const Vector fdx = oracles::central_difference(
        [&](const Vector& y) { return qp_bar_value(inst, 0, y, z); }, x);
    const Vector fdz = oracles::central_difference(
        [&](const Vector& w) { return qp_bar_value(inst, 0, x, w); }, z);
    CHECK(dist(qp_bar_grad_x(inst, 0, x, z), fdx) <= 1e-5 * std::max(1.0, norm(fdx)));
    CHECK(dist(qp_bar_grad_z(inst, 0, x, z), fdz) <= 1e-5 * std::max(1.0, norm(fdz)));
  }
}

TEST_CASE("trust-region examples") {
  Matrix mi(2, 2);
  mi(0, 0) = mi(1, 1) = -1.0;
  const TrsResult a = trs_solve(mi, Vector{1.0, 0.0}, 0.3);
  CHECK(dist(a.z, Vector{1.0, 0.0}) <= 1e-10);
  CHECK(a.value == doctest::Approx(1.3));
  const TrsResult b = trs_solve(Matrix(2, 2), Vector{3.0, 4.0}, 0.1);
  CHECK(dist(b.z, Vector{0.6, 0.8}) <= 1e-10);
  CHECK(b.value == doctest::Approx(10.1));
  const TrsResult in = trs_solve(mi, Vector{0.2, 0.1}, 0.0);
  CHECK(in.sigma == 0.0);
  CHECK(dist(in.z, Vector{0.2, 0.1}) <= 1e-12);
  // Hard case: r orthogonal to the top eigenvector.
  Matrix h(2, 2);
  h(1, 1) = -1.0;
  const TrsResult hc = trs_solve(h, Vector{0.0, 0.1}, 0.0);
  CHECK(hc.hard_case);
  CHECK(norm(hc.z) == doctest::Approx(1.0));
  CHECK(hc.value == doctest::Approx(0.01 + 0.0).epsilon(1e-9));
  CHECK(hc.kkt_residual <= 1e-8);
}

TEST_CASE("trust-region optimality conditions on random instances") {
  std::mt19937_64 rng(14);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t k = 1 + t % 10;
    Matrix m = random_sym(rng, k);
    if (t % 2 == 0) {
      const double top = lambda_max(m);
      for (std::size_t j = 0; j < k; ++j) m(j, j) -= top;
    }
    const Vector r = random_vec(rng, k, t % 3 == 0 ? 0.01 : 1.0);
    const TrsResult res = trs_solve(m, r, 0.0);
    worst = std::max(worst, trs_residual(m, r, res));
    CHECK(std::abs(res.kkt_residual - trs_residual(m, r, res)) <= 1e-12);
    CHECK(res.sigma >= 0.0);
    CHECK(norm(res.z) <= 1.0 + 1e-10);
    CHECK(res.sigma * std::abs(norm(res.z) - 1.0) <= 1e-8);
    Matrix shifted = m;
    for (std::size_t j = 0; j < k; ++j) shifted(j, j) -= res.sigma;
    CHECK(lambda_max(shifted) <= 1e-8);
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("trust-region value against a dense grid") {
  std::mt19937_64 rng(15);
  for (int t = 0; t < 5; ++t) {
    Matrix m = random_sym(rng, 2);
    const double top = lambda_max(m);
    for (std::size_t j = 0; j < 2; ++j) m(j, j) -= top;
    const Vector r = random_vec(rng, 2);
    const TrsResult res = trs_solve(m, r, 0.5);
    auto f = [&](const Vector& z) { return dot(z, matvec(m, z)) + 2.0 * dot(r, z) + 0.5; };
    const double grid = oracles::ball_grid_max(f, 2, 1.0, 500, 2000);
    CHECK(res.value >= grid - 1e-12);
    CHECK(res.value - grid <= 1e-4);
  }
}

TEST_CASE("pessimization and feasibility gap against grids") {
  std::mt19937_64 rng(16);
  for (int t = 0; t < 100; ++t) {
    const std::size_t k = 1 + t % 3;
    const QpInstance inst = gen_instance(3, k, 3, 2, 100 + t);
    const Vector x = random_unit_ball(rng, 3);
    double fg = -kInf;
    for (std::size_t i = 0; i <= 2; ++i) {
      auto g = [&](const Vector& z) { return qp_value(inst, i, x, z); };
      const int ang = k == 3 ? 60 : 720;
      const double grid = oracles::ball_grid_max(g, k, 1.0, k == 3 ? 30 : 200, ang);
      const Pessimum p = qp_pessimize(inst, i, x);
      CHECK(p.value >= grid - 1e-9);
      CHECK(p.value - grid <= 1e-3);
      CHECK(qp_value(inst, i, x, p.z) == doctest::Approx(p.value).epsilon(1e-9));
      if (i >= 1) fg = std::max(fg, p.value);
    }
    CHECK(feasibility_gap(inst, x) == fg);
    CHECK(worst_objective(inst, x) == qp_pessimize(inst, 0, x).value);
  }
  const QpInstance none = gen_instance(3, 2, 3, 0, 1);
  CHECK(feasibility_gap(none, Vector(3, 0.0)) == -kInf);
  const QpInstance inst = gen_instance(3, 2, 3, 1, 1);
  CHECK(feasibility_gap(inst, Vector(3, 0.0)) == doctest::Approx(-0.05));
}

TEST_CASE("optimality gap ratio") {
  CHECK(ogr_from(0.1, 1.0, 0.5, 1e-3) == kInf);
  CHECK(ogr_from(1e-3, 0.5, 0.5, 1e-3) == 0.0);
  CHECK(ogr_from(-1.0, -0.4, -0.5, 1e-3) == doctest::Approx(0.2));
  CHECK(ogr_from(-1.0, 1e-7, 0.0, 1e-3) == doctest::Approx(0.1));
}

TEST_CASE("cutting planes on the 1-D robust LP") {
  const ProblemModel model(fixtures::lp_1d());
  CuttingPlaneOptions co;
  co.eps = 1e-6;
  const CuttingPlaneResult r = cutting_planes(model, co, BarrierMaster{});
  CHECK(r.converged);
  CHECK(std::abs(r.trace.x_avg[0] - 1.0) <= 1e-6);
  CHECK(r.lower_bound <= 1.0 + 1e-9);
  CHECK(r.lower_bound >= 1.0 - 1e-6);
  for (std::size_t k = 1; k < r.lower_bounds.size(); ++k) {
    CHECK(r.lower_bounds[k] >= r.lower_bounds[k - 1]);
    CHECK(r.scenario_counts[k] > r.scenario_counts[k - 1]);
  }
  // Only z = 0: nominal constraint x >= 0.
  ScenarioSet zero;
  zero.z = {{}, {Vector{0.0}}};
  CHECK(std::abs(lower_bound_from_cuts(model, zero, BarrierMaster{})) <= 1e-6);
  ScenarioSet ext;
  ext.z = {{}, {Vector{-1.0}, Vector{1.0}}};
  CHECK(lower_bound_from_cuts(model, ext, BarrierMaster{}) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("cutting planes stop after one round when the nominal point is robust") {
  RobustProblem p = fixtures::lp_1d();
  BiaffineConstraint b = p.constraints[0].biaffine_data();
  b.q = {0.0};
  b.d = {1.0};
  b.gamma = -5.0;  // x <= 5, inactive on [-2, 2]
  p.constraints[0] = Constraint::biaffine(b, p.constraints[0].zset());
  const CuttingPlaneResult r = cutting_planes(ProblemModel(p), {}, BarrierMaster{});
  CHECK(r.converged);
  CHECK(r.trace.checkpoints.size() == 1);
  CHECK(r.trace.x_avg[0] == doctest::Approx(-2.0).epsilon(1e-6));
}

TEST_CASE("cutting-plane bound on a small QP") {
  auto inst = std::make_shared<const QpInstance>(gen_instance(5, 3, 4, 2, 4));
  const QpModel model(inst);
  const CuttingPlaneResult r = cutting_planes(model, {}, BarrierMaster{});
  CHECK(r.converged);
  for (std::size_t k = 1; k < r.lower_bounds.size(); ++k) {
    CHECK(r.lower_bounds[k] >= r.lower_bounds[k - 1]);
    CHECK(r.scenario_counts[k] > r.scenario_counts[k - 1]);
  }
  // Any robust-feasible point is at least the bound.
  std::mt19937_64 rng(17);
  int feasible = 0;
  for (int t = 0; t < 200; ++t) {
    const Vector x = random_unit_ball(rng, 5);
    if (feasibility_gap(*inst, x) <= 0.0) {
      ++feasible;
      CHECK(worst_objective(*inst, x) >= r.lower_bound);
    }
  }
  CHECK(feasible > 0);
  CHECK(worst_objective(*inst, r.trace.x_avg) >= r.lower_bound);
}

TEST_CASE("first-order pessimization") {
  const ProblemModel lp(fixtures::lp_1d());
  FoPessOptions fo;
  const IterTrace t = fo_pess(lp, Vector{0.0}, 100000, fo);
  CHECK(t.checkpoints.back().feas_gap <= 1e-3);
  CHECK(std::abs(t.x_avg[0] - 1.0) <= 5e-2);

  RobustProblem ball;
  ball.c = {1.0, 0.0};
  ball.domain = SetDescriptor::l2_ball(2, 1.0);
  const IterTrace u = fo_pess(ProblemModel(ball), Vector{0.0, 0.0}, 10000, fo);
  CHECK(dist(u.x_avg, Vector{-1.0, 0.0}) <= 0.05);
}

TEST_CASE("online-convex-optimization baseline") {
  const ProblemModel lp(fixtures::lp_1d());
  OcoOptions oo;
  const IterTrace t = oco_ogd(lp, Vector{0.0}, 40000, oo);
  CHECK(t.checkpoints.back().feas_gap <= 1e-3);
  CHECK(std::abs(t.x_avg[0] - 1.0) <= 1e-2);
}
