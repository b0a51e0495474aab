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

// Independent reference computations for the tests: a cyclic Jacobi
// eigensolver, dense grids, central finite differences and polygon vertex
// enumeration.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>

#include "rsp/linalg.hpp"

namespace rsp::oracles {

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
inline Vector jacobi_eigenvalues(Matrix a) {
  const std::size_t n = a.rows();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  Vector ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

// Singular values (descending) from the Jacobi eigenvalues of A^T A.
inline Vector jacobi_singular_values(const Matrix& a) {
  Vector ev = jacobi_eigenvalues(gram(a));
  Vector sv;
  for (auto it = ev.rbegin(); it != ev.rend(); ++it) sv.push_back(std::sqrt(std::max(*it, 0.0)));
  return sv;
}

inline Vector central_difference(const std::function<double(const Vector&)>& f, Vector x,
                                 double h = 1e-6) {
  Vector g(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double x0 = x[j];
    x[j] = x0 + h;
    const double fp = f(x);
    x[j] = x0 - h;
    const double fm = f(x);
    x[j] = x0;
    g[j] = (fp - fm) / (2.0 * h);
  }
  return g;
}

// max f over the ball of radius r in dimension d <= 3 on a polar grid,
// including the interior shells.
inline double ball_grid_max(const std::function<double(const Vector&)>& f, std::size_t d,
                            double r, int radial, int angular) {
  double best = -INFINITY;
  const double pi = 3.14159265358979323846;
  for (int ir = 0; ir <= radial; ++ir) {
    const double rho = r * ir / radial;
    if (d == 1) {
      best = std::max({best, f({rho}), f({-rho})});
    } else if (d == 2) {
      for (int ia = 0; ia < angular; ++ia) {
        const double a = 2.0 * pi * ia / angular;
        best = std::max(best, f({rho * std::cos(a), rho * std::sin(a)}));
      }
    } else {
      for (int ia = 0; ia < angular; ++ia) {
        const double th = pi * (ia + 0.5) / angular;
        for (int ib = 0; ib < 2 * angular; ++ib) {
          const double ph = pi * ib / angular;
          best = std::max(best, f({rho * std::sin(th) * std::cos(ph),
                                   rho * std::sin(th) * std::sin(ph), rho * std::cos(th)}));
        }
      }
    }
  }
  return best;
}

// Vertices of the polygon {p : a p_0 + b p_1 <= c for every row (a, b, c)}
// by intersecting every pair of boundary lines.
inline std::vector<Vector> polygon_vertices(const std::vector<std::array<double, 3>>& rows) {
  std::vector<Vector> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = i + 1; j < rows.size(); ++j) {
      const auto& r = rows[i];
      const auto& s = rows[j];
      const double det = r[0] * s[1] - r[1] * s[0];
      if (std::abs(det) < 1e-14) continue;
      const Vector v{(r[2] * s[1] - r[1] * s[2]) / det, (r[0] * s[2] - r[2] * s[0]) / det};
      bool inside = true;
      for (const auto& t : rows) inside = inside && t[0] * v[0] + t[1] * v[1] <= t[2] + 1e-12;
      if (inside) out.push_back(v);
    }
  }
  return out;
}

}  // namespace rsp::oracles
