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

#include "rsp/perspective.hpp"

#include <algorithm>
#include <cmath>

#include "rsp/error.hpp"
#include "rsp/papc.hpp"

namespace rsp {

namespace {

template <class F>
auto guarded(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    fail(ErrorCode::OracleFailure, e.what());
  }
}

}  // namespace

double perspective_value(const Constraint& c, ConstVec x, const LiftedVar& u) {
  require(u.z_tilde.size() == c.z_dim(), ErrorCode::DimensionMismatch,
          "lifted variable dimension");
  if (u.lambda <= 0.0) return 0.0;
  const Vector z = scaled(1.0 / u.lambda, u.z_tilde);
  return u.lambda * guarded([&] { return c.eval(x, z); });
}

PerspectiveSubgrad perspective_subgrad(const Constraint& c, ConstVec x, const LiftedVar& u) {
  require(u.z_tilde.size() == c.z_dim(), ErrorCode::DimensionMismatch,
          "lifted variable dimension");
  const bool apex = u.lambda <= 0.0;
  const Vector z = apex ? Vector(c.z_dim(), 0.0) : scaled(1.0 / u.lambda, u.z_tilde);
  PerspectiveSubgrad out;
  if (apex) {
    out.dx.assign(c.x_dim(), 0.0);
  } else {
    out.dx = guarded([&] { return c.subgrad_x(x, z); });
    for (double& v : out.dx) v *= u.lambda;
  }
  const Vector dz = guarded([&] { return c.subgrad_negz(x, z); });
  const double g = guarded([&] { return c.eval(x, z); });
  out.du = dz;
  out.du.push_back(-g - dot(z, dz));
  return out;
}

double default_v_lower(const RobustProblem& p) {
  const double rx = outer_radius(p.domain);
  require(std::isfinite(rx), ErrorCode::Unbounded,
          "a lower bound on the optimal value is required for unbounded X");
  return -norm(p.c) * rx - 1.0;
}

double estimate_eps_hat(const RobustProblem& p, ConstVec x_hat, int iters) {
  const std::size_t n = p.n();
  auto ok = [&](double eps) {
    Vector y(x_hat.begin(), x_hat.end());
    for (std::size_t j = 0; j < n; ++j) {
      for (double sgn : {-1.0, 1.0}) {
        y[j] = x_hat[j] + sgn * eps;
        if (!contains(p.domain, y, 0.0)) return false;
        for (const auto& c : p.constraints)
          if (c.pessimize(y).value >= 0.0) return false;
      }
      y[j] = x_hat[j];
    }
    return true;
  };
  double hi = outer_radius(p.domain);
  if (!std::isfinite(hi)) hi = 1.0;
  hi = std::max(hi, 1e-12);
  while (ok(hi) && hi < 1e12) hi *= 2.0;
  double lo = 0.0;
  for (int it = 0; it < iters; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (ok(mid)) lo = mid;
    else hi = mid;
  }
  return lo;
}

SlaterCertificate make_certificate(const RobustProblem& p, ConstVec x_hat,
                                   std::optional<double> v_lower,
                                   std::optional<double> eps_hat) {
  SlaterCertificate cert;
  cert.x_hat.assign(x_hat.begin(), x_hat.end());
  cert.f_hat = robust_values(p, x_hat);
  for (std::size_t i = 0; i < cert.f_hat.size(); ++i)
    require(cert.f_hat[i] < 0.0, ErrorCode::NotStrictlyFeasible,
            "constraint " + std::to_string(i) + " is not strictly satisfied at the Slater point");
  cert.v_lower = v_lower ? *v_lower : default_v_lower(p);
  cert.eps_hat = eps_hat ? *eps_hat : estimate_eps_hat(p, x_hat);
  return cert;
}

Vector uncertainty_radii(const RobustProblem& p) {
  Vector r(p.m());
  for (std::size_t i = 0; i < p.m(); ++i) r[i] = outer_radius(p.constraints[i].zset());
  return r;
}

DualBounds dual_bounds(const RobustProblem& p, const SlaterCertificate& cert,
                       ConstVec radii) {
  require(radii.size() == p.m(), ErrorCode::DimensionMismatch, "one radius per constraint");
  DualBounds b;
  const double gap = dot(p.c, cert.x_hat) - cert.v_lower;
  require(gap > 0.0, ErrorCode::InvalidArgument,
          "v_lower must be a strict lower bound below c^T x_hat");
  if (p.m() > 0) {
    require(cert.f_hat.size() == p.m(), ErrorCode::DimensionMismatch,
            "certificate has wrong number of constraint values");
    const double fmax = *std::max_element(cert.f_hat.begin(), cert.f_hat.end());
    require(fmax < 0.0, ErrorCode::NotStrictlyFeasible, "Slater values must be negative");
    b.lambda_bar = gap / (-fmax);
  }
  if (p.r() > 0) {
    require(cert.eps_hat > 0.0, ErrorCode::InvalidArgument, "eps_hat must be positive");
    b.r_w = (gap / cert.eps_hat + norm(p.c)) / sigma_min(p.eq_A);
  }
  b.r_u.resize(p.m());
  for (std::size_t i = 0; i < p.m(); ++i)
    b.r_u[i] = b.lambda_bar * std::sqrt(1.0 + radii[i] * radii[i]);
  return b;
}

double r_pi_bound(const CompiledBiaffine& compiled, const DualBounds& bounds,
                  ConstVec radii) {
  require(radii.size() == compiled.Qt.size(), ErrorCode::DimensionMismatch,
          "one radius per constraint");
  double s = 0.0;
  for (std::size_t i = 0; i < compiled.Qt.size(); ++i)
    s += spectral_norm(compiled.Qt[i]) * (radii[i] + 1.0);
  return norm(compiled.c) + bounds.lambda_bar * s;
}

}  // namespace rsp
