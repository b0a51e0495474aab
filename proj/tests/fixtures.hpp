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

// Small robust problems with known optima shared by the unit and acceptance
// tests.

#include <cmath>

#include "oracles.hpp"
#include "rsp/problem.hpp"

namespace rsp::fixtures {

// min x s.t. z - x <= 0 for all z in [-1, 1], x in [-2, 2]. Optimum x = 1.
inline RobustProblem lp_1d() {
  RobustProblem p;
  p.c = {1.0};
  p.domain = SetDescriptor::box({-2.0}, {2.0});
  BiaffineConstraint b;
  b.Q = Matrix(1, 1);
  b.d = {-1.0};
  b.q = {1.0};
  b.gamma = 0.0;
  p.constraints.push_back(Constraint::biaffine(b, SetDescriptor::box({-1.0}, {1.0})));
  return p;
}

// min -x1 - x2 s.t. (a + z)^T x <= 1 for ||z|| <= 0.5, a = (1, 1),
// x in [-2, 2]^2. Optimum x = t (1, 1) with t = 1 / (2 + 0.5 sqrt 2).
inline RobustProblem lp_2d() {
  RobustProblem p;
  p.c = {-1.0, -1.0};
  p.domain = SetDescriptor::box({-2.0, -2.0}, {2.0, 2.0});
  BiaffineConstraint b;
  b.Q = Matrix::identity(2);
  b.d = {1.0, 1.0};
  b.q = {0.0, 0.0};
  b.gamma = -1.0;
  p.constraints.push_back(Constraint::biaffine(b, SetDescriptor::l2_ball(2, 0.5)));
  return p;
}
inline double lp_2d_t() { return 1.0 / (2.0 + 0.5 * std::sqrt(2.0)); }

// min -x s.t. x z - 0.5 <= 0 for |z| <= 1, x in [-1, 1]. Optimum x = 0.5.
inline RobustProblem papc_toy() {
  RobustProblem p;
  p.c = {-1.0};
  p.domain = SetDescriptor::box({-1.0}, {1.0});
  BiaffineConstraint b;
  b.Q = Matrix(1, 1, 1.0);
  b.d = {0.0};
  b.q = {0.0};
  b.gamma = -0.5;
  p.constraints.push_back(Constraint::biaffine(b, SetDescriptor::box({-1.0}, {1.0})));
  return p;
}

// lp_2d with the budgeted set Z = [-0.5, 0.5]^2 cap 0.6 B_1. The robust
// counterpart at x = t (1, 1) is 2t + 0.6t <= 1, so t = 1 / 2.6.
inline SetDescriptor budgeted_set() {
  return SetDescriptor::intersection(
      {SetDescriptor::box({-0.5, -0.5}, {0.5, 0.5}), SetDescriptor::l1_ball(2, 0.6)});
}
inline RobustProblem budgeted_lp() {
  RobustProblem p = lp_2d();
  BiaffineConstraint b = p.constraints[0].biaffine_data();
  p.constraints[0] = Constraint::biaffine(b, budgeted_set());
  return p;
}
inline double budgeted_t() { return 1.0 / 2.6; }

// x + z <= 0 for z in [-1, 1] on X = [lo, hi]: strictly feasible for x < -1.
inline RobustProblem slater_lp(double lo, double hi) {
  RobustProblem p;
  p.c = {0.0};
  p.domain = SetDescriptor::box({lo}, {hi});
  BiaffineConstraint b;
  b.Q = Matrix(1, 1);
  b.d = {1.0};
  b.q = {1.0};
  b.gamma = 0.0;
  p.constraints.push_back(Constraint::biaffine(b, SetDescriptor::box({-1.0}, {1.0})));
  return p;
}

// budgeted_lp with a general oracle whose worst case is found by enumerating
// the vertices of the budgeted polygon.
inline RobustProblem budgeted_lp_enumerated() {
  const std::vector<Vector> verts = oracles::polygon_vertices({{1, 0, 0.5},
                                                               {-1, 0, 0.5},
                                                               {0, 1, 0.5},
                                                               {0, -1, 0.5},
                                                               {1, 1, 0.6},
                                                               {1, -1, 0.6},
                                                               {-1, 1, 0.6},
                                                               {-1, -1, 0.6}});
  GeneralOracle g;
  g.eval = [](ConstVec x, ConstVec z) { return (1 + z[0]) * x[0] + (1 + z[1]) * x[1] - 1.0; };
  g.subgrad_x = [](ConstVec, ConstVec z) { return Vector{1 + z[0], 1 + z[1]}; };
  g.subgrad_negz = [](ConstVec x, ConstVec) { return Vector{-x[0], -x[1]}; };
  g.pessimize = [verts, eval = g.eval](ConstVec x) {
    Pessimum best{verts.front(), eval(x, verts.front())};
    for (const auto& v : verts) {
      const double val = eval(x, v);
      if (val > best.value) best = {v, val};
    }
    return best;
  };
  RobustProblem p = lp_2d();
  p.constraints[0] = Constraint::general(2, g, budgeted_set());
  return p;
}

}  // namespace rsp::fixtures
