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

#include "rsp/splitting.hpp"

#include <cmath>
#include <numeric>

#include "rsp/error.hpp"

namespace rsp {

std::size_t LiftedProblem::u_blocks() const {
  std::size_t s = 0;
  for (const auto& f : factors) s += f.size();
  return s;
}

std::size_t LiftedProblem::omega_blocks() const {
  std::size_t s = 0;
  for (const auto& f : factors) s += f.size() - 1;
  return s;
}

std::size_t LiftedProblem::u_offset(std::size_t i) const {
  std::size_t s = 0;
  for (std::size_t j = 0; j < i; ++j) s += factors[j].size();
  return s;
}

std::size_t LiftedProblem::omega_offset(std::size_t i) const {
  std::size_t s = 0;
  for (std::size_t j = 0; j < i; ++j) s += factors[j].size() - 1;
  return s;
}

Vector LiftedProblem::recover_x(ConstVec x) const {
  require(x.size() == base.n(), ErrorCode::DimensionMismatch, "lifted x dimension");
  return Vector(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(original_n));
}

SaddleState LiftedProblem::zero_state(ConstVec x0) const {
  require(x0.size() == original_n, ErrorCode::DimensionMismatch, "start point dimension");
  SaddleState s;
  for (std::size_t q = 0; q < x_copies; ++q) s.x.insert(s.x.end(), x0.begin(), x0.end());
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const std::size_t d = base.constraints[i].z_dim();
    for (std::size_t l = 0; l < factors[i].size(); ++l) s.u.push_back({Vector(d, 0.0), 0.0});
    for (std::size_t l = 0; l + 1 < factors[i].size(); ++l)
      s.omega.push_back({Vector(d, 0.0), 0.0});
  }
  s.w.assign(base.r(), 0.0);
  s.pi.assign(base.n(), 0.0);
  return s;
}

LiftedProblem identity_lift(const RobustProblem& p) {
  LiftedProblem out;
  out.base = p;
  out.original_n = p.n();
  out.x_copies = 1;
  for (const auto& c : p.constraints) out.factors.push_back({c.zset()});
  out.omega_specs.assign(p.m(), {});
  return out;
}

namespace {

Constraint rebind_to_copy(const Constraint& c, std::size_t n, std::size_t n_total) {
  if (c.is_biaffine()) {
    const BiaffineConstraint& b = c.biaffine_data();
    BiaffineConstraint e;
    e.Q = Matrix(n_total, b.z_dim());
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < b.z_dim(); ++j) e.Q(i, j) = b.Q(i, j);
    e.d = b.d;
    e.d.resize(n_total, 0.0);
    e.q = b.q;
    e.gamma = b.gamma;
    return Constraint::biaffine(std::move(e), c.zset());
  }
  const GeneralOracle g = *c.general_oracle();
  GeneralOracle h;
  h.eval = [g, n](ConstVec x, ConstVec z) { return g.eval(x.first(n), z); };
  h.subgrad_x = [g, n, n_total](ConstVec x, ConstVec z) {
    Vector s = g.subgrad_x(x.first(n), z);
    s.resize(n_total, 0.0);
    return s;
  };
  h.subgrad_negz = [g, n](ConstVec x, ConstVec z) { return g.subgrad_negz(x.first(n), z); };
  if (g.pessimize) h.pessimize = [g, n](ConstVec x) { return g.pessimize(x.first(n)); };
  return Constraint::general(n_total, std::move(h), c.zset());
}

}  // namespace

LiftedProblem lift_domain_intersection(const RobustProblem& p, double rank_tol) {
  if (p.domain.kind() != SetKind::Intersection) return identity_lift(p);
  const auto& parts = p.domain.parts();
  const std::size_t q = parts.size();
  const std::size_t n = p.n();
  const std::size_t nt = q * n;
  for (const auto& part : parts)
    require(part.is_projectable(), ErrorCode::UnsupportedSet,
            "domain factors must be simple sets");

  LiftedProblem out;
  out.original_n = n;
  out.x_copies = q;
  RobustProblem& b = out.base;
  b.c = p.c;
  b.c.resize(nt, 0.0);
  b.domain = SetDescriptor::product(parts);
  for (const auto& c : p.constraints) b.constraints.push_back(rebind_to_copy(c, n, nt));
  const std::size_t r = p.r() + (q - 1) * n;
  b.eq_A = Matrix(r, nt);
  b.eq_b.assign(r, 0.0);
  for (std::size_t i = 0; i < p.r(); ++i) {
    for (std::size_t j = 0; j < n; ++j) b.eq_A(i, j) = p.eq_A(i, j);
    b.eq_b[i] = p.eq_b[i];
  }
  for (std::size_t copy = 1; copy < q; ++copy) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t row = p.r() + (copy - 1) * n + j;
      b.eq_A(row, j) = 1.0;
      b.eq_A(row, copy * n + j) = -1.0;
    }
  }
  if (r > 0) {
    const Vector sv = singular_values(b.eq_A);
    require(sv.back() > rank_tol * sv.front(), ErrorCode::RankDeficient,
            "copy equalities are rank deficient");
  }
  for (const auto& c : b.constraints) out.factors.push_back({c.zset()});
  out.omega_specs.assign(b.m(), {});
  return out;
}

std::vector<std::vector<OmegaSpec>> omega_bounds(const LiftedProblem& lifted, ConstVec eps,
                                                 ConstVec mu_bar) {
  const std::size_t m = lifted.factors.size();
  require(eps.size() == m && mu_bar.size() == m, ErrorCode::DimensionMismatch,
          "one eps and one mu_bar per constraint");
  std::vector<std::vector<OmegaSpec>> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    require(eps[i] > 0.0, ErrorCode::NonpositiveEps,
            "constraint " + std::to_string(i) + " needs a positive inscribed radius");
    require(mu_bar[i] > 0.0, ErrorCode::InvalidArgument, "mu_bar must be positive");
    out[i].assign(lifted.factors[i].size() - 1, OmegaSpec{mu_bar[i], eps[i]});
  }
  return out;
}

LiftedProblem lift_uncertainty_intersection(LiftedProblem lifted, ConstVec mu_bar) {
  const RobustProblem& p = lifted.base;
  const std::size_t m = p.m();
  require(mu_bar.empty() || mu_bar.size() == m, ErrorCode::DimensionMismatch,
          "one mu_bar per constraint");
  Vector eps(m), mb(m);
  bool any_split = false;
  for (std::size_t i = 0; i < m; ++i) {
    const SetDescriptor& z = p.constraints[i].zset();
    if (z.kind() == SetKind::Intersection) {
      lifted.factors[i] = z.parts();
      any_split = true;
    } else {
      lifted.factors[i] = {z};
    }
    eps[i] = inscribed_radius(z);
  }
  if (!any_split) {
    lifted.omega_specs.assign(m, {});
    return lifted;
  }
  if (mu_bar.empty()) {
    mb = estimate_mu_bar(p);
  } else {
    mb.assign(mu_bar.begin(), mu_bar.end());
  }
  for (std::size_t i = 0; i < m; ++i)
    if (lifted.factors[i].size() == 1 && eps[i] <= 0.0) eps[i] = 1.0;
  lifted.omega_specs = omega_bounds(lifted, eps, mb);
  return lifted;
}

LiftedProblem lift_uncertainty_intersection(const RobustProblem& p, ConstVec mu_bar) {
  return lift_uncertainty_intersection(identity_lift(p), mu_bar);
}

Vector estimate_mu_bar(const RobustProblem& p, long budget) {
  const std::size_t m = p.m();
  const std::size_t n = p.n();
  Vector out(m);
  require(p.domain.is_projectable(), ErrorCode::UnsupportedSet,
          "nominal bound estimation needs a projectable domain");
  const double rx = outer_radius(p.domain);
  require(std::isfinite(rx), ErrorCode::Unbounded, "domain must be bounded");
  auto nominal = [&](std::size_t j, ConstVec x) {
    const Vector z0(p.constraints[j].z_dim(), 0.0);
    return std::pair{p.constraints[j].eval(x, z0), p.constraints[j].subgrad_x(x, z0)};
  };
  // Start from the projection of the origin.
  const Vector x0 = project_simple(p.domain, Vector(n, 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    Vector x = x0;
    double best = kInf;
    const double penalty = 10.0;
    for (long k = 1; k <= budget; ++k) {
      auto [gi, si] = nominal(i, x);
      double viol = 0.0;
      Vector dir = si;
      for (std::size_t j = 0; j < m; ++j) {
        if (j == i) continue;
        auto [gj, sj] = nominal(j, x);
        if (gj > 0.0) {
          viol = std::max(viol, gj);
          axpy(penalty, sj, dir);
        }
      }
      if (viol <= 1e-9) best = std::min(best, gi);
      const double nd = norm(dir);
      if (nd == 0.0) break;
      const double step = rx / (nd * std::sqrt(static_cast<double>(k)));
      axpy(-step, dir, x);
      x = project_simple(p.domain, x);
    }
    if (!std::isfinite(best)) best = nominal(i, x).first;
    require(std::isfinite(best), ErrorCode::Unbounded, "nominal minimum diverged");
    out[i] = std::max(-1.1 * best, 1e-3);
  }
  return out;
}

double lifted_coupling_value(const LiftedProblem& lifted, std::size_t i, ConstVec x,
                             const std::vector<LiftedVar>& u,
                             const std::vector<OmegaPoint>& omega) {
  const std::size_t s = lifted.splits(i);
  const std::size_t uo = lifted.u_offset(i);
  const std::size_t oo = lifted.omega_offset(i);
  const LiftedVar& last = u[uo + s - 1];
  double v = perspective_value(lifted.base.constraints[i], x, last);
  for (std::size_t l = 0; l + 1 < s; ++l) {
    const OmegaPoint& w = omega[oo + l];
    const LiftedVar& ul = u[uo + l];
    for (std::size_t j = 0; j < w.nu.size(); ++j) v += w.nu[j] * (ul.z_tilde[j] - last.z_tilde[j]);
    v += w.mu * (ul.lambda - last.lambda);
  }
  return v;
}

}  // namespace rsp
