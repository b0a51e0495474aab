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
#include <cmath>
#include <numeric>

#include "rsp/error.hpp"
#include "rsp/sets.hpp"

namespace rsp {

std::string_view to_string(SetKind kind) {
  switch (kind) {
    case SetKind::L2Ball: return "l2";
    case SetKind::L1Ball: return "l1";
    case SetKind::LinfBall: return "linf";
    case SetKind::Box: return "box";
    case SetKind::Singleton: return "singleton";
    case SetKind::Intersection: return "intersection";
    case SetKind::Product: return "product";
  }
  return "unknown";
}

SetDescriptor SetDescriptor::l2_ball(std::size_t dim, double radius) {
  SetDescriptor s;
  s.kind_ = SetKind::L2Ball;
  s.dim_ = dim;
  s.radius_ = radius;
  s.validate();
  return s;
}

SetDescriptor SetDescriptor::l1_ball(std::size_t dim, double radius) {
  SetDescriptor s = l2_ball(dim, radius);
  s.kind_ = SetKind::L1Ball;
  return s;
}

SetDescriptor SetDescriptor::linf_ball(std::size_t dim, double radius) {
  SetDescriptor s = l2_ball(dim, radius);
  s.kind_ = SetKind::LinfBall;
  return s;
}

SetDescriptor SetDescriptor::box(Vector lo, Vector hi) {
  SetDescriptor s;
  s.kind_ = SetKind::Box;
  s.dim_ = lo.size();
  s.lo_ = std::move(lo);
  s.hi_ = std::move(hi);
  s.validate();
  return s;
}

SetDescriptor SetDescriptor::singleton(Vector point) {
  SetDescriptor s;
  s.kind_ = SetKind::Singleton;
  s.dim_ = point.size();
  s.point_ = std::move(point);
  return s;
}

SetDescriptor SetDescriptor::intersection(std::vector<SetDescriptor> parts) {
  SetDescriptor s;
  s.kind_ = SetKind::Intersection;
  for (auto& p : parts) {
    if (p.kind_ == SetKind::Intersection) {
      for (auto& q : p.parts_) s.parts_.push_back(std::move(q));
    } else {
      s.parts_.push_back(std::move(p));
    }
  }
  s.dim_ = s.parts_.empty() ? 0 : s.parts_.front().dim_;
  s.validate();
  return s;
}

SetDescriptor SetDescriptor::product(std::vector<SetDescriptor> parts) {
  SetDescriptor s;
  s.kind_ = SetKind::Product;
  s.parts_ = std::move(parts);
  for (const auto& p : s.parts_) s.dim_ += p.dim_;
  s.validate();
  return s;
}

bool SetDescriptor::is_projectable() const noexcept {
  if (kind_ == SetKind::Intersection) return false;
  if (kind_ == SetKind::Product)
    return std::all_of(parts_.begin(), parts_.end(),
                       [](const SetDescriptor& p) { return p.is_projectable(); });
  return true;
}

void SetDescriptor::validate() const {
  switch (kind_) {
    case SetKind::L2Ball:
    case SetKind::L1Ball:
    case SetKind::LinfBall:
      require(radius_ > 0.0 && std::isfinite(radius_), ErrorCode::InvalidArgument,
              "ball radius must be positive and finite");
      break;
    case SetKind::Box:
      require(lo_.size() == hi_.size(), ErrorCode::DimensionMismatch,
              "box bounds differ in length");
      for (std::size_t j = 0; j < lo_.size(); ++j)
        require(lo_[j] <= hi_[j], ErrorCode::InvalidArgument, "box with lo > hi");
      break;
    case SetKind::Singleton:
      break;
    case SetKind::Intersection:
      require(!parts_.empty(), ErrorCode::InvalidArgument, "empty intersection");
      for (const auto& p : parts_) {
        require(p.is_simple(), ErrorCode::InvalidArgument,
                "intersection parts must be simple sets");
        require(p.dim_ == dim_, ErrorCode::DimensionMismatch,
                "intersection parts differ in dimension");
        p.validate();
      }
      break;
    case SetKind::Product:
      for (const auto& p : parts_) p.validate();
      break;
  }
}

namespace {

Vector project_l1(std::span<const double> y, double r) {
  double s = 0.0;
  for (double v : y) s += std::abs(v);
  if (s <= r) return Vector(y.begin(), y.end());
  Vector a(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) a[i] = std::abs(y[i]);
  std::sort(a.begin(), a.end(), std::greater<>());
  double cum = 0.0;
  double thr = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    cum += a[j];
    const double t = (cum - r) / static_cast<double>(j + 1);
    if (a[j] - t > 0.0) thr = t;
  }
  Vector out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i)
    out[i] = std::copysign(std::max(std::abs(y[i]) - thr, 0.0), y[i]);
  return out;
}

template <class F>
void for_each_block(const SetDescriptor& s, F&& f) {
  std::size_t off = 0;
  for (const auto& p : s.parts()) {
    f(p, off);
    off += p.dim();
  }
}

// Box (or linf ball) intersected with at most one l1 ball, all containing the
// origin. Returns false when `s` is not of that form.
struct Budgeted {
  Vector lo, hi;
  double budget = kInf;
};

bool as_budgeted(const SetDescriptor& s, Budgeted& out) {
  const std::size_t d = s.dim();
  out.lo.assign(d, -kInf);
  out.hi.assign(d, kInf);
  out.budget = kInf;
  for (const auto& p : s.parts()) {
    switch (p.kind()) {
      case SetKind::Box:
        for (std::size_t j = 0; j < d; ++j) {
          out.lo[j] = std::max(out.lo[j], p.lo()[j]);
          out.hi[j] = std::min(out.hi[j], p.hi()[j]);
        }
        break;
      case SetKind::LinfBall:
        for (std::size_t j = 0; j < d; ++j) {
          out.lo[j] = std::max(out.lo[j], -p.radius());
          out.hi[j] = std::min(out.hi[j], p.radius());
        }
        break;
      case SetKind::L1Ball:
        out.budget = std::min(out.budget, p.radius());
        break;
      default:
        return false;
    }
  }
  for (std::size_t j = 0; j < d; ++j)
    if (!(out.lo[j] <= 0.0 && 0.0 <= out.hi[j])) return false;
  return true;
}

// Fractional knapsack maximizer of y^T z over the budgeted set.
Vector budgeted_argmax(const Budgeted& b, std::span<const double> y) {
  const std::size_t d = y.size();
  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t c) {
    return std::abs(y[a]) > std::abs(y[c]);
  });
  Vector z(d, 0.0);
  double left = b.budget;
  for (std::size_t j : order) {
    if (y[j] == 0.0 || left <= 0.0) break;
    const double cap = y[j] > 0.0 ? b.hi[j] : -b.lo[j];
    require(std::isfinite(cap) || std::isfinite(left), ErrorCode::UnsupportedSet,
            "unbounded budgeted set");
    const double take = std::min(cap, left);
    z[j] = y[j] > 0.0 ? take : -take;
    left -= take;
  }
  return z;
}

}  // namespace

Vector project_simple(const SetDescriptor& s, std::span<const double> y) {
  require(y.size() == s.dim(), ErrorCode::DimensionMismatch,
          "projection input has wrong dimension");
  switch (s.kind()) {
    case SetKind::L2Ball: {
      const double n = norm(y);
      if (n <= s.radius()) return Vector(y.begin(), y.end());
      return scaled(s.radius() / n, y);
    }
    case SetKind::L1Ball:
      return project_l1(y, s.radius());
    case SetKind::LinfBall: {
      Vector out(y.begin(), y.end());
      for (double& v : out) v = std::clamp(v, -s.radius(), s.radius());
      return out;
    }
    case SetKind::Box: {
      Vector out(y.begin(), y.end());
      for (std::size_t j = 0; j < out.size(); ++j)
        out[j] = std::clamp(out[j], s.lo()[j], s.hi()[j]);
      return out;
    }
    case SetKind::Singleton:
      return s.point();
    case SetKind::Product: {
      Vector out(y.size());
      for_each_block(s, [&](const SetDescriptor& p, std::size_t off) {
        const Vector part = project_simple(p, y.subspan(off, p.dim()));
        std::copy(part.begin(), part.end(), out.begin() + static_cast<long>(off));
      });
      return out;
    }
    case SetKind::Intersection:
      break;
  }
  fail(ErrorCode::UnsupportedSet,
       "intersection projection must go through the splitting lifter");
}

bool contains(const SetDescriptor& s, std::span<const double> y, double tol) {
  if (y.size() != s.dim()) return false;
  switch (s.kind()) {
    case SetKind::L2Ball:
      return norm(y) <= s.radius() + tol;
    case SetKind::L1Ball: {
      double a = 0.0;
      for (double v : y) a += std::abs(v);
      return a <= s.radius() + tol;
    }
    case SetKind::LinfBall:
      return norm_inf(y) <= s.radius() + tol;
    case SetKind::Box:
      for (std::size_t j = 0; j < y.size(); ++j)
        if (y[j] < s.lo()[j] - tol || y[j] > s.hi()[j] + tol) return false;
      return true;
    case SetKind::Singleton:
      return dist(y, s.point()) <= tol;
    case SetKind::Intersection:
      return std::all_of(s.parts().begin(), s.parts().end(),
                         [&](const SetDescriptor& p) { return contains(p, y, tol); });
    case SetKind::Product: {
      bool ok = true;
      for_each_block(s, [&](const SetDescriptor& p, std::size_t off) {
        ok = ok && contains(p, y.subspan(off, p.dim()), tol);
      });
      return ok;
    }
  }
  return false;
}

Vector support_argmax(const SetDescriptor& s, std::span<const double> y) {
  require(y.size() == s.dim(), ErrorCode::DimensionMismatch, "support input dimension");
  const std::size_t d = y.size();
  switch (s.kind()) {
    case SetKind::L2Ball: {
      const double n = norm(y);
      if (n == 0.0) return Vector(d, 0.0);
      return scaled(s.radius() / n, y);
    }
    case SetKind::L1Ball: {
      Vector z(d, 0.0);
      if (d == 0) return z;
      std::size_t best = 0;
      for (std::size_t j = 1; j < d; ++j)
        if (std::abs(y[j]) > std::abs(y[best])) best = j;
      if (y[best] != 0.0) z[best] = std::copysign(s.radius(), y[best]);
      return z;
    }
    case SetKind::LinfBall: {
      Vector z(d, 0.0);
      for (std::size_t j = 0; j < d; ++j)
        if (y[j] != 0.0) z[j] = std::copysign(s.radius(), y[j]);
      return z;
    }
    case SetKind::Box: {
      Vector z(d);
      for (std::size_t j = 0; j < d; ++j)
        z[j] = y[j] > 0.0 ? s.hi()[j] : (y[j] < 0.0 ? s.lo()[j] : std::clamp(0.0, s.lo()[j], s.hi()[j]));
      return z;
    }
    case SetKind::Singleton:
      return s.point();
    case SetKind::Product: {
      Vector z(d);
      for_each_block(s, [&](const SetDescriptor& p, std::size_t off) {
        const Vector part = support_argmax(p, y.subspan(off, p.dim()));
        std::copy(part.begin(), part.end(), z.begin() + static_cast<long>(off));
      });
      return z;
    }
    case SetKind::Intersection: {
      Budgeted b;
      require(as_budgeted(s, b), ErrorCode::UnsupportedSet,
              "support function only for box/l1 intersections containing the origin");
      return budgeted_argmax(b, y);
    }
  }
  return Vector(d, 0.0);
}

double support(const SetDescriptor& s, std::span<const double> y) {
  switch (s.kind()) {
    case SetKind::L2Ball:
      return s.radius() * norm(y);
    case SetKind::L1Ball:
      return s.radius() * norm_inf(y);
    case SetKind::LinfBall: {
      double a = 0.0;
      for (double v : y) a += std::abs(v);
      return s.radius() * a;
    }
    default:
      break;
  }
  const Vector z = support_argmax(s, y);
  return dot(y, z);
}

double outer_radius(const SetDescriptor& s) {
  switch (s.kind()) {
    case SetKind::L2Ball:
    case SetKind::L1Ball:
      return s.radius();
    case SetKind::LinfBall:
      return s.radius() * std::sqrt(static_cast<double>(s.dim()));
    case SetKind::Box: {
      double r2 = 0.0;
      for (std::size_t j = 0; j < s.dim(); ++j) {
        const double m = std::max(std::abs(s.lo()[j]), std::abs(s.hi()[j]));
        r2 += m * m;
      }
      return std::sqrt(r2);
    }
    case SetKind::Singleton:
      return norm(s.point());
    case SetKind::Intersection: {
      double r = kInf;
      for (const auto& p : s.parts()) r = std::min(r, outer_radius(p));
      return r;
    }
    case SetKind::Product: {
      double r2 = 0.0;
      for (const auto& p : s.parts()) {
        const double r = outer_radius(p);
        r2 += r * r;
      }
      return std::sqrt(r2);
    }
  }
  return kInf;
}

double inscribed_radius(const SetDescriptor& s) {
  switch (s.kind()) {
    case SetKind::L2Ball:
    case SetKind::LinfBall:
      return s.radius();
    case SetKind::L1Ball:
      return s.dim() == 0 ? s.radius()
                          : s.radius() / std::sqrt(static_cast<double>(s.dim()));
    case SetKind::Box: {
      double r = kInf;
      for (std::size_t j = 0; j < s.dim(); ++j)
        r = std::min({r, -s.lo()[j], s.hi()[j]});
      return std::max(r, 0.0);
    }
    case SetKind::Singleton:
      return s.dim() == 0 ? kInf : 0.0;
    case SetKind::Intersection:
    case SetKind::Product: {
      double r = kInf;
      for (const auto& p : s.parts()) r = std::min(r, inscribed_radius(p));
      return r;
    }
  }
  return 0.0;
}

namespace {

double psi(const SetDescriptor& base, std::span<const double> z, double lambda,
           double mu, Vector& scratch) {
  scratch.assign(z.begin(), z.end());
  for (double& v : scratch) v /= mu;
  const Vector p = project_simple(base, scratch);
  return mu * kernels::nrm2_sq(p) - dot(z, p) + mu - lambda;
}

}  // namespace

double scalar_root_mu(const SetDescriptor& base, std::span<const double> z_tilde,
                      double lambda, double tol, int max_iter) {
  require(tol > 0.0, ErrorCode::InvalidArgument, "tolerance must be positive");
  require(z_tilde.size() == base.dim(), ErrorCode::DimensionMismatch,
          "cone input has wrong dimension");
  require(base.is_projectable(), ErrorCode::UnsupportedSet,
          "cone base must be projectable");
  if (support(base, z_tilde) <= -lambda) return 0.0;

  Vector scratch;
  const double eps_ball = inscribed_radius(base);
  const double zn = norm(z_tilde);
  double hi = std::max({lambda, 1.0, eps_ball > 0.0 ? zn / eps_ball + lambda : zn + lambda});
  double f_hi = psi(base, z_tilde, lambda, hi, scratch);
  int doublings = 0;
  while (f_hi < 0.0) {
    require(++doublings <= max_iter, ErrorCode::NoConvergence,
            "could not bracket the cone root");
    hi *= 2.0;
    f_hi = psi(base, z_tilde, lambda, hi, scratch);
  }
  if (std::abs(f_hi) <= tol) return hi;

  double lo = 0.0;
  // Limit of psi at 0+ is -sigma_Z(z) - lambda < 0 on this branch.
  double f_lo = -support(base, z_tilde) - lambda;
  const double slack = 1e-9 * std::max({1.0, std::abs(f_lo), std::abs(f_hi)});
  for (int it = 0; it < max_iter; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = psi(base, z_tilde, lambda, mid, scratch);
    require(f_mid >= f_lo - slack && f_mid <= f_hi + slack, ErrorCode::NoConvergence,
            "cone residual is not monotone on the bracket");
    if (std::abs(f_mid) <= tol || mid <= lo || mid >= hi) return mid;
    if (f_mid < 0.0) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
      f_hi = f_mid;
    }
  }
  fail(ErrorCode::NoConvergence, "cone root bisection hit the iteration limit");
}

std::optional<double> closed_form_mu(const SetDescriptor& base,
                                     std::span<const double> y, double lambda) {
  const std::size_t d = y.size();
  if (d != base.dim() || d == 0) return std::nullopt;
  const double r = base.is_simple() ? base.radius() : 0.0;
  switch (base.kind()) {
    case SetKind::L2Ball: {
      const double ny = norm(y);
      if (ny <= r * lambda || r * ny <= -lambda) return std::nullopt;
      return (lambda + r * ny) / (1.0 + r * r);
    }
    case SetKind::LinfBall:
    case SetKind::L1Ball: {
      Vector a(d);
      for (std::size_t j = 0; j < d; ++j) a[j] = std::abs(y[j]);
      std::sort(a.begin(), a.end(), std::greater<>());
      const double sum = std::accumulate(a.begin(), a.end(), 0.0);
      const bool linf = base.kind() == SetKind::LinfBall;
      const double in_norm = linf ? a.front() : sum;
      const double polar = linf ? r * sum : r * a.front();
      if (in_norm <= r * lambda || polar <= -lambda) return std::nullopt;
      double cum = 0.0;
      for (std::size_t j = 1; j <= d; ++j) {
        cum += a[j - 1];
        const double jj = static_cast<double>(j);
        const double next = j < d ? a[j] : 0.0;
        if (linf) {
          const double mu = (lambda + r * cum) / (1.0 + jj * r * r);
          if (mu > 0.0 && a[j - 1] > r * mu && next <= r * mu) return mu;
        } else {
          const double mu = (jj * lambda + r * cum) / (jj + r * r);
          const double thr = (cum - r * mu) / jj;
          if (mu > 0.0 && thr >= 0.0 && a[j - 1] > thr && next <= thr) return mu;
        }
      }
      return std::nullopt;
    }
    default:
      return std::nullopt;
  }
}

ConeProjection project_cone_lift(const ConeLiftSpec& spec, std::span<const double> z_tilde,
                                 double lambda, double tol) {
  const SetDescriptor& base = spec.base;
  require(z_tilde.size() == base.dim(), ErrorCode::DimensionMismatch,
          "cone input has wrong dimension");
  require(spec.lambda_cap > 0.0, ErrorCode::InvalidArgument, "lambda cap must be positive");
  ConeProjection out;
  if (lambda >= 0.0 && lambda <= spec.lambda_cap) {
    bool inside = false;
    if (lambda > 0.0) {
      const Vector z = scaled(1.0 / lambda, z_tilde);
      inside = contains(base, z, 0.0);
    } else {
      inside = norm_inf(z_tilde) == 0.0 && contains(base, Vector(base.dim(), 0.0), 0.0);
    }
    if (inside) {
      out.point = {Vector(z_tilde.begin(), z_tilde.end()), lambda};
      out.mu = lambda;
      return out;
    }
  }
  double mu = 0.0;
  if (auto cf = closed_form_mu(base, z_tilde, lambda)) {
    mu = *cf;
  } else {
    mu = scalar_root_mu(base, z_tilde, lambda, tol);
  }
  mu = std::clamp(mu, 0.0, spec.lambda_cap);
  out.mu = mu;
  out.point.lambda = mu;
  if (mu > 0.0) {
    Vector p = project_simple(base, scaled(1.0 / mu, z_tilde));
    for (double& v : p) v *= mu;
    out.point.z_tilde = std::move(p);
  } else {
    out.point.z_tilde.assign(base.dim(), 0.0);
  }
  return out;
}

double cone_kkt_residual(const ConeLiftSpec& spec, const LiftedPoint& u,
                         const LiftedPoint& p) {
  const SetDescriptor& base = spec.base;
  double res = 0.0;
  // Feasibility of p.
  res += std::max(0.0, -p.lambda) + std::max(0.0, p.lambda - spec.lambda_cap);
  if (p.lambda > 0.0) {
    const Vector z = scaled(1.0 / p.lambda, p.z_tilde);
    res += p.lambda * dist(z, project_simple(base, z));
  } else {
    res += norm(p.z_tilde);
  }
  // Residual r = u - p must lie in the normal cone of the capped cone at p.
  Vector rz = sub(u.z_tilde, p.z_tilde);
  double rl = u.lambda - p.lambda;
  const double sig = support(base, rz);
  if (std::isfinite(spec.lambda_cap) &&
      p.lambda >= spec.lambda_cap - 1e-12 * std::max(1.0, spec.lambda_cap)) {
    rl -= std::max(0.0, sig + rl);
  }
  res += std::max(0.0, sig + rl);
  res += std::abs(dot(rz, p.z_tilde) + rl * p.lambda);
  return res;
}

Vector prox_support(const SetDescriptor& x_set, double theta, std::span<const double> y) {
  require(theta > 0.0, ErrorCode::InvalidArgument, "prox step must be positive");
  const Vector p = project_simple(x_set, scaled(1.0 / theta, y));
  Vector out(y.begin(), y.end());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] -= theta * p[j];
  return out;
}

OmegaPoint project_omega(const OmegaSpec& spec, std::span<const double> nu, double mu,
                         double tol) {
  require(spec.mu_bar > 0.0 && spec.eps > 0.0, ErrorCode::NonpositiveEps,
          "omega set needs positive mu_bar and eps");
  const ConeLiftSpec cone{SetDescriptor::l2_ball(nu.size(), 1.0 / spec.eps), spec.mu_bar};
  const ConeProjection p = project_cone_lift(cone, nu, -mu, tol);
  return {p.point.z_tilde, -p.point.lambda};
}

}  // namespace rsp
