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

// Robust problem data model:
//
//   min c^T x  s.t.  max_{z in Z_i} g_i(x, z) <= 0  (i = 1..m),  A x = b,  x in X.
//
// Constraints are either biaffine, g(x,z) = x^T Q z + d^T x + q^T z + gamma,
// or supplied as black-box oracles with subgradients.

#include <cstddef>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "rsp/linalg.hpp"
#include "rsp/sets.hpp"

namespace rsp {

using ConstVec = std::span<const double>;

struct Pessimum {
  Vector z;
  double value = 0.0;
};

struct BiaffineConstraint {
  Matrix Q;  // n x d
  Vector d;  // n
  Vector q;  // d
  double gamma = 0.0;

  std::size_t x_dim() const { return d.size(); }
  std::size_t z_dim() const { return q.size(); }
  double eval(ConstVec x, ConstVec z) const;
  // Q z + d
  Vector grad_x(ConstVec z) const;
  // Q^T x + q
  Vector grad_z(ConstVec x) const;
};

struct GeneralOracle {
  std::function<double(ConstVec x, ConstVec z)> eval;
  // Element of the subdifferential of g(., z) at x.
  std::function<Vector(ConstVec x, ConstVec z)> subgrad_x;
  // Element of the subdifferential of -g(x, .) at z.
  std::function<Vector(ConstVec x, ConstVec z)> subgrad_negz;
  // Optional exact maximizer of g(x, .) over the uncertainty set.
  std::function<Pessimum(ConstVec x)> pessimize;
};

class Constraint {
 public:
  Constraint() = default;
  static Constraint biaffine(BiaffineConstraint data, SetDescriptor zset);
  static Constraint general(std::size_t x_dim, GeneralOracle oracle, SetDescriptor zset);

  bool is_biaffine() const { return std::holds_alternative<BiaffineConstraint>(oracle_); }
  const BiaffineConstraint& biaffine_data() const;
  const GeneralOracle* general_oracle() const {
    return std::get_if<GeneralOracle>(&oracle_);
  }
  const SetDescriptor& zset() const { return zset_; }
  std::size_t x_dim() const { return x_dim_; }
  std::size_t z_dim() const { return zset_.dim(); }

  double eval(ConstVec x, ConstVec z) const;
  Vector subgrad_x(ConstVec x, ConstVec z) const;
  Vector subgrad_negz(ConstVec x, ConstVec z) const;

  bool can_pessimize() const;
  // max_{z in Z} g(x, z) with a maximizer. Throws RequiresPessimizer for
  // general oracles without a callback.
  Pessimum pessimize(ConstVec x) const;

 private:
  std::variant<GeneralOracle, BiaffineConstraint> oracle_;
  SetDescriptor zset_;
  std::size_t x_dim_ = 0;
};

double eval_constraint(const Constraint& c, ConstVec x, ConstVec z);

struct RobustProblem {
  Vector c;
  SetDescriptor domain;
  std::vector<Constraint> constraints;
  Matrix eq_A;  // r x n; empty when r = 0
  Vector eq_b;

  std::size_t n() const { return c.size(); }
  std::size_t m() const { return constraints.size(); }
  std::size_t r() const { return eq_b.size(); }
  bool all_biaffine() const;
};

struct ValidationReport {
  bool ok = false;
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  std::vector<std::string> checks;
};

// Checks dimensions, the rank of the equality system (sigma_min >
// rank_tol * sigma_max) and that every uncertainty set contains the origin.
// Throws DimensionMismatch, RankDeficient or OriginNotInZ.
ValidationReport validate_problem(const RobustProblem& p, double rank_tol = 1e-8);

// Shifts uncertainty set i so that `interior` maps to the origin:
// z = z' + interior. Supported for boxes, singletons and budgeted
// intersections whose box part is shifted; the oracle is rewritten
// accordingly.
RobustProblem translate_uncertainty(const RobustProblem& p, std::size_t i,
                                    ConstVec interior, ValidationReport* report = nullptr);

// Robust values f_i(x) = max_z g_i(x, z).
Vector robust_values(const RobustProblem& p, ConstVec x);
// sum_i [f_i(x)]_+ + ||A x - b||.
double feasibility_measure(const RobustProblem& p, ConstVec x);

// Constraint on (x, t): g(x, z) + cx^T x + t_coef * t.
Constraint extend_with_t(const Constraint& c, const Vector& cx, double t_coef);

// Appends a scalar t with objective t and the constraint
// c^T x + g0(x, z) - t <= 0. Existing constraints ignore t. The domain becomes
// X x [t_lo, t_hi].
RobustProblem epigraph_lift(const Constraint& objective, const RobustProblem& p,
                            double t_lo, double t_hi);

// Randomized Jensen midpoint test: largest observed violation of convexity in
// x and of concavity in z. Advisory only.
struct ConvexityProbe {
  double max_convexity_violation = 0.0;
  double max_concavity_violation = 0.0;
};
ConvexityProbe jensen_spot_check(const Constraint& c, const SetDescriptor& x_set,
                                 int samples, std::uint64_t seed);

// A random point of a projectable set (Gaussian scaled to the set's outer
// radius, then projected).
Vector sample_point(const SetDescriptor& s, std::mt19937_64& rng);

}  // namespace rsp
