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

#pragma once

// Convex set descriptors and the projection calculus built on them:
// Euclidean projections onto simple sets, support functions, projections onto
// lifted perspective cones {(z, lambda): z in lambda*Z, 0 <= lambda <= cap},
// prox of support functions and the omega multiplier sets.

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "rsp/linalg.hpp"

namespace rsp {

enum class SetKind { L2Ball, L1Ball, LinfBall, Box, Singleton, Intersection, Product };

std::string_view to_string(SetKind kind);

// Balls are centred at the origin. Product is a block-separable Cartesian
// product; its parts occupy consecutive coordinate ranges.
class SetDescriptor {
 public:
  SetDescriptor() = default;

  static SetDescriptor l2_ball(std::size_t dim, double radius);
  static SetDescriptor l1_ball(std::size_t dim, double radius);
  static SetDescriptor linf_ball(std::size_t dim, double radius);
  static SetDescriptor box(Vector lo, Vector hi);
  static SetDescriptor singleton(Vector point);
  // Nested intersections are flattened.
  static SetDescriptor intersection(std::vector<SetDescriptor> parts);
  static SetDescriptor product(std::vector<SetDescriptor> parts);

  SetKind kind() const noexcept { return kind_; }
  std::size_t dim() const noexcept { return dim_; }
  double radius() const noexcept { return radius_; }
  const Vector& lo() const noexcept { return lo_; }
  const Vector& hi() const noexcept { return hi_; }
  const Vector& point() const noexcept { return point_; }
  const std::vector<SetDescriptor>& parts() const noexcept { return parts_; }

  bool is_simple() const noexcept {
    return kind_ != SetKind::Intersection && kind_ != SetKind::Product;
  }
  // Simple, or a product whose parts are all simple.
  bool is_projectable() const noexcept;

  // Throws InvalidArgument on bad radii, inverted boxes, empty or nested
  // intersections, or mismatched part dimensions.
  void validate() const;

  bool operator==(const SetDescriptor&) const = default;

 private:
  SetKind kind_ = SetKind::Singleton;
  std::size_t dim_ = 0;
  double radius_ = 0.0;
  Vector lo_, hi_, point_;
  std::vector<SetDescriptor> parts_;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Euclidean projection onto a simple set or a product of simple sets.
// Throws UnsupportedSet for intersections.
Vector project_simple(const SetDescriptor& s, std::span<const double> y);

bool contains(const SetDescriptor& s, std::span<const double> y, double tol = 1e-12);

// sigma_S(y) = max_{z in S} y^T z. Intersections are supported only for a box
// containing the origin intersected with an l1 ball (budgeted sets).
double support(const SetDescriptor& s, std::span<const double> y);
// A maximizer of y^T z over S (first maximal index on ties).
Vector support_argmax(const SetDescriptor& s, std::span<const double> y);

// max_{z in S} ||z||; for intersections the smallest part bound.
double outer_radius(const SetDescriptor& s);
// Radius of the largest origin-centred Euclidean ball inside S (0 if the
// origin is not interior).
double inscribed_radius(const SetDescriptor& s);

// Scalar root of the perspective-cone equation
//   psi(mu) = mu ||P_Z(z/mu)||^2 - z^T P_Z(z/mu) + mu - lambda = 0
// by bracketing bisection. Returns 0 on the polar branch
// sigma_Z(z) <= -lambda.
double scalar_root_mu(const SetDescriptor& base, std::span<const double> z_tilde,
                      double lambda, double tol = 1e-10, int max_iter = 200);

// Closed-form root for l2, l1 and linf balls on the branch where z_tilde lies
// outside lambda*Z and outside the polar cone. Empty when the input is on
// another branch or the set family has no closed form.
std::optional<double> closed_form_mu(const SetDescriptor& base,
                                     std::span<const double> z_tilde, double lambda);

struct ConeLiftSpec {
  SetDescriptor base;
  double lambda_cap = kInf;
};

struct LiftedPoint {
  Vector z_tilde;
  double lambda = 0.0;
};

struct ConeProjection {
  LiftedPoint point;
  double mu = 0.0;
};

ConeProjection project_cone_lift(const ConeLiftSpec& spec, std::span<const double> z_tilde,
                                 double lambda, double tol = 1e-10);

// Optimality residual of `p` as the projection of `u` onto the capped cone:
// feasibility of p, polarity of u - p (after removing the cap multiplier)
// and complementarity.
double cone_kkt_residual(const ConeLiftSpec& spec, const LiftedPoint& u,
                         const LiftedPoint& p);

// prox_{theta sigma_X}(y) = y - theta P_X(y / theta).
Vector prox_support(const SetDescriptor& x_set, double theta, std::span<const double> y);

struct OmegaSpec {
  double mu_bar = 1.0;
  double eps = 1.0;
};

struct OmegaPoint {
  Vector nu;
  double mu = 0.0;
};

// Projection onto {(nu, mu): -mu_bar <= mu <= 0, ||nu|| <= -mu / eps}.
OmegaPoint project_omega(const OmegaSpec& spec, std::span<const double> nu, double mu,
                         double tol = 1e-10);

}  // namespace rsp
