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

#include "rsp/qp.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "rsp/error.hpp"
#include "rsp/io.hpp"

namespace rsp {

Matrix QpInstance::a_of_z(std::size_t i, ConstVec z) const {
  require(z.size() == K, ErrorCode::DimensionMismatch, "z dimension");
  Matrix a = P[i][0];
  for (std::size_t k = 0; k < K; ++k) {
    if (z[k] == 0.0) continue;
    auto& dst = a.data();
    const auto& src = P[i][k + 1].data();
    for (std::size_t e = 0; e < dst.size(); ++e) dst[e] += z[k] * src[e];
  }
  return a;
}

Matrix QpInstance::p_of_x(std::size_t i, ConstVec x) const {
  require(x.size() == n, ErrorCode::DimensionMismatch, "x dimension");
  Matrix out(L, K);
  for (std::size_t k = 0; k < K; ++k) {
    const Vector col = matvec(P[i][k + 1], x);
    for (std::size_t l = 0; l < L; ++l) out(l, k) = col[l];
  }
  return out;
}

double stacked_norm(const QpInstance& inst, std::size_t i) {
  Matrix st((inst.K + 1) * inst.L, inst.n);
  for (std::size_t k = 0; k <= inst.K; ++k)
    for (std::size_t l = 0; l < inst.L; ++l)
      for (std::size_t j = 0; j < inst.n; ++j) st(k * inst.L + l, j) = inst.P[i][k](l, j);
  return spectral_norm(st);
}

QpInstance gen_instance(std::size_t n, std::size_t K, std::size_t L, std::size_t m,
                        std::uint64_t seed) {
  require(n > 0 && L > 0, ErrorCode::InvalidArgument, "n and L must be positive");
  QpInstance inst;
  inst.n = n;
  inst.K = K;
  inst.L = L;
  inst.m = m;
  inst.seed = seed;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  inst.P.resize(m + 1);
  inst.b.resize(m + 1);
  inst.c.assign(m + 1, -0.05);
  for (std::size_t i = 0; i <= m; ++i) {
    for (std::size_t k = 0; k <= K; ++k) {
      Matrix p(L, n);
      for (double& v : p.data()) v = unif(rng);
      inst.P[i].push_back(std::move(p));
    }
    Vector b(n);
    for (double& v : b) v = unif(rng);
    const double sn = stacked_norm(inst, i);
    for (auto& p : inst.P[i])
      for (double& v : p.data()) v /= sn;
    const double nb = norm(b);
    for (double& v : b) v /= nb;
    inst.b[i] = std::move(b);
  }
  return inst;
}

nlohmann::json qp_to_json(const QpInstance& inst) {
  nlohmann::json j;
  j["kind"] = "robust_qp";
  j["n"] = inst.n;
  j["K"] = inst.K;
  j["L"] = inst.L;
  j["m"] = inst.m;
  j["seed"] = inst.seed;
  nlohmann::json ps = nlohmann::json::array();
  for (const auto& blocks : inst.P) {
    nlohmann::json bj = nlohmann::json::array();
    for (const auto& p : blocks) bj.push_back(matrix_to_json(p));
    ps.push_back(bj);
  }
  j["P"] = ps;
  j["b"] = inst.b;
  j["c"] = inst.c;
  return j;
}

QpInstance qp_from_json(const nlohmann::json& j) {
  QpInstance inst;
  try {
    inst.n = j.at("n").get<std::size_t>();
    inst.K = j.at("K").get<std::size_t>();
    inst.L = j.at("L").get<std::size_t>();
    inst.m = j.at("m").get<std::size_t>();
    inst.seed = j.value("seed", std::uint64_t{0});
    for (const auto& bj : j.at("P")) {
      std::vector<Matrix> blocks;
      for (const auto& pj : bj) blocks.push_back(matrix_from_json(pj, inst.n));
      inst.P.push_back(std::move(blocks));
    }
    inst.b = j.at("b").get<std::vector<Vector>>();
    inst.c = j.at("c").get<Vector>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::IoError, std::string("malformed QP instance: ") + e.what());
  }
  const std::size_t cnt = inst.m + 1;
  require(inst.P.size() == cnt && inst.b.size() == cnt && inst.c.size() == cnt,
          ErrorCode::DimensionMismatch, "QP instance needs m + 1 blocks");
  for (std::size_t i = 0; i < cnt; ++i) {
    require(inst.P[i].size() == inst.K + 1 && inst.b[i].size() == inst.n,
            ErrorCode::DimensionMismatch, "QP block dimensions");
    for (const auto& p : inst.P[i])
      require(p.rows() == inst.L && p.cols() == inst.n, ErrorCode::DimensionMismatch,
              "P block must be L x n");
  }
  return inst;
}

double qp_value(const QpInstance& inst, std::size_t i, ConstVec x, ConstVec z) {
  const Vector ax = matvec(inst.a_of_z(i, z), x);
  return dot(ax, ax) + dot(inst.b[i], x) + inst.c[i];
}

Vector qp_grad_x(const QpInstance& inst, std::size_t i, ConstVec x, ConstVec z) {
  const Matrix a = inst.a_of_z(i, z);
  Vector g = matvec_t(a, matvec(a, x));
  for (std::size_t j = 0; j < g.size(); ++j) g[j] = 2.0 * g[j] + inst.b[i][j];
  return g;
}

Matrix qp_hess_x(const QpInstance& inst, std::size_t i, ConstVec z) {
  Matrix h = gram(inst.a_of_z(i, z));
  for (double& v : h.data()) v *= 2.0;
  return h;
}

EigenPair lambda_max_pair(const Matrix& sym) {
  const std::size_t d = sym.rows();
  require(sym.cols() == d, ErrorCode::DimensionMismatch, "matrix must be square");
  if (d == 0) return {0.0, {}};
  // Gershgorin shift makes the operator positive semidefinite.
  double lo = kInf;
  for (std::size_t i = 0; i < d; ++i) {
    double off = 0.0;
    for (std::size_t j = 0; j < d; ++j)
      if (j != i) off += std::abs(sym(i, j));
    lo = std::min(lo, sym(i, i) - off);
  }
  const double shift = std::max(0.0, -lo);
  auto op = [&](std::span<const double> v, std::span<double> out) {
    for (std::size_t i = 0; i < d; ++i) out[i] = dot(sym.row(i), v) + shift * v[i];
  };
  const PowerResult pr = power_iteration(op, d, 1e-14, 300);
  if (pr.vector.size() == d) {
    const Vector av = matvec(sym, pr.vector);
    const double lam = dot(pr.vector, av);
    double res = 0.0;
    for (std::size_t i = 0; i < d; ++i) res += (av[i] - lam * pr.vector[i]) * (av[i] - lam * pr.vector[i]);
    if (std::sqrt(res) <= 1e-9 * std::max(1.0, std::abs(lam))) return {lam, pr.vector};
  }
  const SymmetricEigen eig = symmetric_eigen(sym);
  EigenPair out;
  out.value = eig.values.back();
  out.vector.resize(d);
  for (std::size_t i = 0; i < d; ++i) out.vector[i] = eig.vectors(i, d - 1);
  return out;
}

double lambda_max(const Matrix& sym) { return lambda_max_pair(sym).value; }

double ConcaveQuadratic::value(ConstVec z) const {
  const Vector mz = matvec(M, z);
  return dot(z, mz) + 2.0 * dot(r, z) + s;
}

ConcaveQuadratic concavify(const QpInstance& inst, std::size_t i, ConstVec x) {
  const Matrix px = inst.p_of_x(i, x);
  const Vector p0x = matvec(inst.P[i][0], x);
  ConcaveQuadratic cq;
  const Matrix q = gram(px);
  const EigenPair top = lambda_max_pair(q);
  cq.shift = std::max(top.value, 0.0);
  cq.top = top.vector;
  cq.M = q;
  for (std::size_t k = 0; k < inst.K; ++k) cq.M(k, k) -= cq.shift;
  cq.r = matvec_t(px, p0x);
  cq.s = dot(p0x, p0x) + dot(inst.b[i], x) + inst.c[i] + cq.shift;
  return cq;
}

double qp_bar_value(const QpInstance& inst, std::size_t i, ConstVec x, ConstVec z) {
  const double lam = lambda_max(gram(inst.p_of_x(i, x)));
  return qp_value(inst, i, x, z) + std::max(lam, 0.0) * (1.0 - dot(z, z));
}

Vector qp_bar_grad_x(const QpInstance& inst, std::size_t i, ConstVec x, ConstVec z) {
  Vector g = qp_grad_x(inst, i, x, z);
  const double slack = 1.0 - dot(z, z);
  if (slack == 0.0 || inst.K == 0) return g;
  const EigenPair top = lambda_max_pair(gram(inst.p_of_x(i, x)));
  // lambda_max(Q(x)) = ||M_v x||^2 with M_v = sum_k v_k P_k.
  Matrix mv(inst.L, inst.n);
  for (std::size_t k = 0; k < inst.K; ++k) {
    const auto& src = inst.P[i][k + 1].data();
    auto& dst = mv.data();
    for (std::size_t e = 0; e < dst.size(); ++e) dst[e] += top.vector[k] * src[e];
  }
  const Vector h = matvec_t(mv, matvec(mv, x));
  axpy(2.0 * slack, h, g);
  return g;
}

Vector qp_bar_grad_z(const QpInstance& inst, std::size_t i, ConstVec x, ConstVec z) {
  const ConcaveQuadratic cq = concavify(inst, i, x);
  Vector g = matvec(cq.M, z);
  for (std::size_t k = 0; k < g.size(); ++k) g[k] = 2.0 * (g[k] + cq.r[k]);
  return g;
}

TrsResult trs_solve(const Matrix& M, ConstVec r, double s, double radius) {
  const std::size_t d = M.rows();
  require(M.cols() == d && r.size() == d, ErrorCode::DimensionMismatch, "TRS dimensions");
  require(radius > 0.0, ErrorCode::InvalidArgument, "TRS radius must be positive");
  TrsResult out;
  if (d == 0) {
    out.value = s;
    return out;
  }
  const SymmetricEigen eig = symmetric_eigen(M);
  const Vector& mu = eig.values;  // ascending
  const double mu_max = mu.back();
  Vector rh(d, 0.0);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t i = 0; i < d; ++i) rh[j] += eig.vectors(i, j) * r[i];
  const double rn = norm(r);
  const double scale = std::max({1.0, std::abs(mu_max), std::abs(mu.front())});
  const double tie = 1e-12 * scale;

  // Coordinates of z(sigma) = (sigma I - M)^{-1} r in the eigenbasis.
  auto coords = [&](double sigma, bool skip_top) {
    Vector zh(d, 0.0);
    for (std::size_t j = 0; j < d; ++j) {
      const double gap = sigma - mu[j];
      if (skip_top && mu_max - mu[j] <= tie) continue;
      zh[j] = gap > 0.0 ? rh[j] / gap : 0.0;
    }
    return zh;
  };

  Vector zh;
  double sigma = 0.0;
  if (mu_max < -tie) {
    zh = coords(0.0, false);
    if (norm(zh) <= radius) sigma = 0.0;
    else zh.clear();
  }
  if (zh.empty()) {
    const double lo = std::max(0.0, mu_max);
    double top_mass = 0.0;
    for (std::size_t j = 0; j < d; ++j)
      if (mu_max - mu[j] <= tie) top_mass += rh[j] * rh[j];
    const Vector partial = coords(lo, true);
    const double pn = norm(partial);
    if (mu_max >= -tie && std::sqrt(top_mass) <= 1e-12 * std::max(1.0, rn) && pn <= radius) {
      // Hard case: move along the top eigenvector to the boundary.
      zh = partial;
      sigma = lo;
      std::size_t jt = d - 1;
      zh[jt] = std::sqrt(std::max(0.0, radius * radius - pn * pn));
      out.hard_case = true;
    } else {
      // Secular equation 1/||z(sigma)|| = 1/radius on (lo, hi].
      double a = lo, b = std::max(lo, mu_max) + rn / radius + tie;
      auto phi = [&](double sg, double* dphi) {
        double n2 = 0.0, n3 = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
          const double gap = sg - mu[j];
          if (gap <= 0.0) return -kInf;
          n2 += rh[j] * rh[j] / (gap * gap);
          n3 += rh[j] * rh[j] / (gap * gap * gap);
        }
        const double nz = std::sqrt(n2);
        if (dphi) *dphi = n3 / (nz * nz * nz);
        return 1.0 / nz - 1.0 / radius;
      };
      sigma = b;
      for (int it = 0; it < 200; ++it) {
        double dphi = 0.0;
        const double f = phi(sigma, &dphi);
        if (std::abs(f) <= 1e-15 / radius) break;
        if (f > 0.0) b = sigma;
        else a = sigma;
        double next = sigma - f / dphi;
        if (!(next > a && next < b) || !std::isfinite(next)) next = 0.5 * (a + b);
        if (b - a <= 1e-16 * std::max(1.0, std::abs(b))) break;
        sigma = next;
      }
      zh = coords(sigma, false);
    }
  }
  out.sigma = sigma;
  out.z.assign(d, 0.0);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) out.z[i] += eig.vectors(i, j) * zh[j];
  double val = s;
  for (std::size_t j = 0; j < d; ++j) val += mu[j] * zh[j] * zh[j] + 2.0 * rh[j] * zh[j];
  out.value = val;
  Vector res = matvec(M, out.z);
  for (std::size_t i = 0; i < d; ++i) res[i] += r[i] - sigma * out.z[i];
  out.kkt_residual = norm(res);
  return out;
}

TrsResult trs_solve(const ConcaveQuadratic& cq, double radius) {
  return trs_solve(cq.M, cq.r, cq.s, radius);
}

Pessimum qp_pessimize(const QpInstance& inst, std::size_t i, ConstVec x) {
  const TrsResult t = trs_solve(concavify(inst, i, x));
  return {t.z, t.value};
}

double feasibility_gap(const QpInstance& inst, ConstVec x) {
  double fg = -kInf;
  for (std::size_t i = 1; i <= inst.m; ++i) fg = std::max(fg, qp_pessimize(inst, i, x).value);
  return fg;
}

double worst_objective(const QpInstance& inst, ConstVec x) {
  return qp_pessimize(inst, 0, x).value;
}

double ogr_from(double fg, double worst, double lb, double eps) {
  if (fg > eps) return kInf;
  return (worst - lb) / std::max(std::abs(lb), 1e-6);
}

double optimality_gap_ratio(const QpInstance& inst, ConstVec x, double lb, double eps) {
  return ogr_from(feasibility_gap(inst, x), worst_objective(inst, x), lb, eps);
}

Constraint qp_constraint(std::shared_ptr<const QpInstance> inst, std::size_t i) {
  require(inst && i <= inst->m, ErrorCode::InvalidArgument, "constraint index out of range");
  GeneralOracle g;
  g.eval = [inst, i](ConstVec x, ConstVec z) { return qp_bar_value(*inst, i, x, z); };
  g.subgrad_x = [inst, i](ConstVec x, ConstVec z) { return qp_bar_grad_x(*inst, i, x, z); };
  g.subgrad_negz = [inst, i](ConstVec x, ConstVec z) {
    return scaled(-1.0, qp_bar_grad_z(*inst, i, x, z));
  };
  g.pessimize = [inst, i](ConstVec x) { return qp_pessimize(*inst, i, x); };
  return Constraint::general(inst->n, std::move(g), SetDescriptor::l2_ball(inst->K, 1.0));
}

RobustProblem qp_epigraph_problem(std::shared_ptr<const QpInstance> inst) {
  RobustProblem base;
  base.c.assign(inst->n, 0.0);
  base.domain = SetDescriptor::l2_ball(inst->n, 1.0);
  for (std::size_t i = 1; i <= inst->m; ++i) base.constraints.push_back(qp_constraint(inst, i));
  return epigraph_lift(qp_constraint(inst, 0), base, -1.1, 3.1);
}

}  // namespace rsp
