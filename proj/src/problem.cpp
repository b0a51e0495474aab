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

#include "rsp/problem.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rsp/error.hpp"

namespace rsp {

double BiaffineConstraint::eval(ConstVec x, ConstVec z) const {
  require(x.size() == x_dim() && z.size() == z_dim(), ErrorCode::DimensionMismatch,
          "biaffine eval dimensions");
  double v = gamma + dot(d, x) + dot(q, z);
  if (!Q.empty()) v += dot(x, matvec(Q, z));
  return v;
}

Vector BiaffineConstraint::grad_x(ConstVec z) const {
  Vector g = Q.empty() ? Vector(x_dim(), 0.0) : matvec(Q, z);
  for (std::size_t j = 0; j < g.size(); ++j) g[j] += d[j];
  return g;
}

Vector BiaffineConstraint::grad_z(ConstVec x) const {
  Vector g = Q.empty() ? Vector(z_dim(), 0.0) : matvec_t(Q, x);
  for (std::size_t j = 0; j < g.size(); ++j) g[j] += q[j];
  return g;
}

Constraint Constraint::biaffine(BiaffineConstraint data, SetDescriptor zset) {
  const std::size_t n = data.d.size();
  const std::size_t dz = data.q.size();
  require(zset.dim() == dz, ErrorCode::DimensionMismatch,
          "uncertainty set dimension differs from q");
  if (!(data.Q.rows() == 0 && data.Q.cols() == 0))
    require(data.Q.rows() == n && data.Q.cols() == dz, ErrorCode::DimensionMismatch,
            "Q must be n x d");
  if (data.Q.rows() == 0 && n > 0 && dz > 0) data.Q = Matrix(n, dz);
  Constraint c;
  c.x_dim_ = n;
  c.zset_ = std::move(zset);
  c.oracle_ = std::move(data);
  return c;
}

Constraint Constraint::general(std::size_t x_dim, GeneralOracle oracle, SetDescriptor zset) {
  require(static_cast<bool>(oracle.eval) && static_cast<bool>(oracle.subgrad_x) &&
              static_cast<bool>(oracle.subgrad_negz),
          ErrorCode::InvalidArgument, "general oracle needs eval and both subgradients");
  Constraint c;
  c.x_dim_ = x_dim;
  c.zset_ = std::move(zset);
  c.oracle_ = std::move(oracle);
  return c;
}

const BiaffineConstraint& Constraint::biaffine_data() const {
  const auto* b = std::get_if<BiaffineConstraint>(&oracle_);
  require(b != nullptr, ErrorCode::NotBiaffine, "constraint is not biaffine");
  return *b;
}

double Constraint::eval(ConstVec x, ConstVec z) const {
  require(x.size() == x_dim_ && z.size() == z_dim(), ErrorCode::DimensionMismatch,
          "constraint eval dimensions");
  if (const auto* b = std::get_if<BiaffineConstraint>(&oracle_)) return b->eval(x, z);
  return std::get<GeneralOracle>(oracle_).eval(x, z);
}

Vector Constraint::subgrad_x(ConstVec x, ConstVec z) const {
  if (const auto* b = std::get_if<BiaffineConstraint>(&oracle_)) return b->grad_x(z);
  Vector g = std::get<GeneralOracle>(oracle_).subgrad_x(x, z);
  require(g.size() == x_dim_, ErrorCode::OracleFailure, "x-subgradient has wrong size");
  return g;
}

Vector Constraint::subgrad_negz(ConstVec x, ConstVec z) const {
  if (const auto* b = std::get_if<BiaffineConstraint>(&oracle_))
    return scaled(-1.0, b->grad_z(x));
  Vector g = std::get<GeneralOracle>(oracle_).subgrad_negz(x, z);
  require(g.size() == z_dim(), ErrorCode::OracleFailure, "z-subgradient has wrong size");
  return g;
}

bool Constraint::can_pessimize() const {
  if (is_biaffine()) {
    if (zset_.is_simple() || zset_.kind() == SetKind::Product) return true;
    try {
      (void)support_argmax(zset_, Vector(zset_.dim(), 0.0));
      return true;
    } catch (const Error&) {
      return false;
    }
  }
  return static_cast<bool>(std::get<GeneralOracle>(oracle_).pessimize);
}

Pessimum Constraint::pessimize(ConstVec x) const {
  require(x.size() == x_dim_, ErrorCode::DimensionMismatch, "pessimize dimension");
  if (const auto* b = std::get_if<BiaffineConstraint>(&oracle_)) {
    const Vector dir = b->grad_z(x);
    Pessimum out;
    out.z = support_argmax(zset_, dir);
    out.value = dot(dir, out.z) + dot(b->d, x) + b->gamma;
    return out;
  }
  const auto& g = std::get<GeneralOracle>(oracle_);
  require(static_cast<bool>(g.pessimize), ErrorCode::RequiresPessimizer,
          "general oracle has no pessimization callback");
  return g.pessimize(x);
}

double eval_constraint(const Constraint& c, ConstVec x, ConstVec z) { return c.eval(x, z); }

bool RobustProblem::all_biaffine() const {
  return std::all_of(constraints.begin(), constraints.end(),
                     [](const Constraint& c) { return c.is_biaffine(); });
}

ValidationReport validate_problem(const RobustProblem& p, double rank_tol) {
  ValidationReport rep;
  const std::size_t n = p.n();
  auto note = [&](const std::string& s) { rep.checks.push_back(s); };

  require(p.domain.dim() == n, ErrorCode::DimensionMismatch,
          "domain dimension differs from c");
  note("domain dimension " + std::to_string(n));
  for (std::size_t i = 0; i < p.m(); ++i) {
    require(p.constraints[i].x_dim() == n, ErrorCode::DimensionMismatch,
            "constraint " + std::to_string(i) + " has wrong x-dimension");
  }
  note("constraint x-dimensions match");
  const std::size_t r = p.r();
  if (r > 0) {
    require(p.eq_A.rows() == r && p.eq_A.cols() == n, ErrorCode::DimensionMismatch,
            "equality matrix must be r x n");
    const Vector sv = singular_values(p.eq_A);
    rep.sigma_max = sv.front();
    rep.sigma_min = r <= n ? sv[r - 1] : 0.0;
    std::ostringstream os;
    os << "sigma_min(A) = " << rep.sigma_min << ", sigma_max(A) = " << rep.sigma_max;
    note(os.str());
    require(r <= n && rep.sigma_min > rank_tol * rep.sigma_max, ErrorCode::RankDeficient,
            "equality matrix is rank deficient (" + os.str() + ")");
  } else {
    require(p.eq_A.rows() == 0, ErrorCode::DimensionMismatch,
            "equality matrix without right-hand side");
    note("no equality constraints");
  }
  for (std::size_t i = 0; i < p.m(); ++i) {
    const SetDescriptor& z = p.constraints[i].zset();
    z.validate();
    require(contains(z, Vector(z.dim(), 0.0), 0.0), ErrorCode::OriginNotInZ,
            "uncertainty set " + std::to_string(i) + " does not contain the origin");
  }
  note("all uncertainty sets contain the origin");
  rep.ok = true;
  return rep;
}

namespace {

SetDescriptor shift_set(const SetDescriptor& s, ConstVec z0) {
  switch (s.kind()) {
    case SetKind::Box:
      return SetDescriptor::box(sub(s.lo(), z0), sub(s.hi(), z0));
    case SetKind::Singleton:
      return SetDescriptor::singleton(sub(s.point(), z0));
    default:
      fail(ErrorCode::UnsupportedSet,
           "only boxes and singletons can be shifted to contain the origin");
  }
}

}  // namespace

RobustProblem translate_uncertainty(const RobustProblem& p, std::size_t i,
                                    ConstVec interior, ValidationReport* report) {
  require(i < p.m(), ErrorCode::InvalidArgument, "constraint index out of range");
  const Constraint& c = p.constraints[i];
  require(interior.size() == c.z_dim(), ErrorCode::DimensionMismatch,
          "interior point dimension");
  RobustProblem out = p;
  const SetDescriptor shifted = shift_set(c.zset(), interior);
  const Vector z0(interior.begin(), interior.end());
  if (c.is_biaffine()) {
    BiaffineConstraint b = c.biaffine_data();
    // g(x, z' + z0) = x^T Q z' + (d + Q z0)^T x + q^T z' + (gamma + q^T z0)
    const Vector qz0 = b.Q.empty() ? Vector(b.x_dim(), 0.0) : matvec(b.Q, z0);
    for (std::size_t j = 0; j < b.d.size(); ++j) b.d[j] += qz0[j];
    b.gamma += dot(b.q, z0);
    out.constraints[i] = Constraint::biaffine(std::move(b), shifted);
  } else {
    const GeneralOracle g = *c.general_oracle();
    GeneralOracle h;
    h.eval = [g, z0](ConstVec x, ConstVec z) { return g.eval(x, add(z, z0)); };
    h.subgrad_x = [g, z0](ConstVec x, ConstVec z) { return g.subgrad_x(x, add(z, z0)); };
    h.subgrad_negz = [g, z0](ConstVec x, ConstVec z) {
      return g.subgrad_negz(x, add(z, z0));
    };
    if (g.pessimize) {
      h.pessimize = [g, z0](ConstVec x) {
        Pessimum pm = g.pessimize(x);
        pm.z = sub(pm.z, z0);
        return pm;
      };
    }
    out.constraints[i] = Constraint::general(c.x_dim(), std::move(h), shifted);
  }
  if (report) {
    std::ostringstream os;
    os << "uncertainty set " << i << " translated by an interior point of norm "
       << norm(z0);
    report->checks.push_back(os.str());
  }
  return out;
}

Vector robust_values(const RobustProblem& p, ConstVec x) {
  Vector f(p.m());
  for (std::size_t i = 0; i < p.m(); ++i) f[i] = p.constraints[i].pessimize(x).value;
  return f;
}

double feasibility_measure(const RobustProblem& p, ConstVec x) {
  double s = 0.0;
  for (double v : robust_values(p, x)) s += std::max(v, 0.0);
  if (p.r() > 0) s += norm(sub(matvec(p.eq_A, x), p.eq_b));
  return s;
}

Constraint extend_with_t(const Constraint& c, const Vector& cx, double t_coef) {
  const std::size_t n = c.x_dim();
  if (c.is_biaffine()) {
    const BiaffineConstraint& b = c.biaffine_data();
    BiaffineConstraint e;
    e.Q = Matrix(n + 1, b.z_dim());
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < b.z_dim(); ++j) e.Q(i, j) = b.Q(i, j);
    e.d = b.d;
    for (std::size_t j = 0; j < n && j < cx.size(); ++j) e.d[j] += cx[j];
    e.d.push_back(t_coef);
    e.q = b.q;
    e.gamma = b.gamma;
    return Constraint::biaffine(std::move(e), c.zset());
  }
  const GeneralOracle g = *c.general_oracle();
  GeneralOracle h;
  h.eval = [g, n, cx, t_coef](ConstVec xt, ConstVec z) {
    const ConstVec x = xt.first(n);
    double v = g.eval(x, z) + t_coef * xt[n];
    if (!cx.empty()) v += dot(cx, x);
    return v;
  };
  h.subgrad_x = [g, n, cx, t_coef](ConstVec xt, ConstVec z) {
    Vector s = g.subgrad_x(xt.first(n), z);
    for (std::size_t j = 0; j < cx.size(); ++j) s[j] += cx[j];
    s.push_back(t_coef);
    return s;
  };
  h.subgrad_negz = [g, n](ConstVec xt, ConstVec z) { return g.subgrad_negz(xt.first(n), z); };
  if (g.pessimize) {
    h.pessimize = [g, n, cx, t_coef](ConstVec xt) {
      const ConstVec x = xt.first(n);
      Pessimum pm = g.pessimize(x);
      pm.value += t_coef * xt[n];
      if (!cx.empty()) pm.value += dot(cx, x);
      return pm;
    };
  }
  return Constraint::general(n + 1, std::move(h), c.zset());
}

RobustProblem epigraph_lift(const Constraint& objective, const RobustProblem& p,
                            double t_lo, double t_hi) {
  const std::size_t n = p.n();
  require(objective.x_dim() == n, ErrorCode::DimensionMismatch,
          "objective oracle has wrong x-dimension");
  require(t_lo <= t_hi, ErrorCode::InvalidArgument, "empty epigraph range");
  RobustProblem out;
  out.c.assign(n + 1, 0.0);
  out.c[n] = 1.0;
  out.domain = SetDescriptor::product(
      {p.domain, SetDescriptor::box(Vector{t_lo}, Vector{t_hi})});
  for (const auto& c : p.constraints) out.constraints.push_back(extend_with_t(c, {}, 0.0));
  out.constraints.push_back(extend_with_t(objective, p.c, -1.0));
  if (p.r() > 0) {
    out.eq_A = Matrix(p.r(), n + 1);
    for (std::size_t i = 0; i < p.r(); ++i)
      for (std::size_t j = 0; j < n; ++j) out.eq_A(i, j) = p.eq_A(i, j);
  }
  out.eq_b = p.eq_b;
  return out;
}

Vector sample_point(const SetDescriptor& s, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const std::size_t d = s.dim();
  Vector y(d);
  for (double& v : y) v = gauss(rng);
  double r = outer_radius(s);
  if (!std::isfinite(r) || r == 0.0) r = 1.0;
  const double ny = norm(y);
  if (ny > 0.0) {
    const double scale = 1.5 * r * unif(rng) / ny;
    for (double& v : y) v *= scale;
  }
  if (s.is_projectable()) return project_simple(s, y);
  // Intersections containing the origin: shrink toward 0 until inside.
  Vector z = project_simple(s.parts().front(), y);
  for (int k = 0; k < 200 && !contains(s, z, 1e-12); ++k)
    for (double& v : z) v *= 0.9;
  return contains(s, z, 1e-12) ? z : Vector(d, 0.0);
}

ConvexityProbe jensen_spot_check(const Constraint& c, const SetDescriptor& x_set,
                                 int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ConvexityProbe out;
  for (int s = 0; s < samples; ++s) {
    const Vector x1 = sample_point(x_set, rng);
    const Vector x2 = sample_point(x_set, rng);
    const Vector z1 = sample_point(c.zset(), rng);
    const Vector z2 = sample_point(c.zset(), rng);
    Vector xm = add(x1, x2);
    for (double& v : xm) v *= 0.5;
    Vector zm = add(z1, z2);
    for (double& v : zm) v *= 0.5;
    const double cx =
        c.eval(xm, z1) - 0.5 * (c.eval(x1, z1) + c.eval(x2, z1));
    const double cz =
        0.5 * (c.eval(x1, z1) + c.eval(x1, z2)) - c.eval(x1, zm);
    out.max_convexity_violation = std::max(out.max_convexity_violation, cx);
    out.max_concavity_violation = std::max(out.max_concavity_violation, cz);
  }
  return out;
}

}  // namespace rsp
