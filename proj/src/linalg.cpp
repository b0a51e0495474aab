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

#include "rsp/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "rsp/error.hpp"

namespace rsp {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::from_rows(const std::vector<Vector>& rows) {
  if (rows.empty()) return {};
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    require(rows[i].size() == m.cols(), ErrorCode::DimensionMismatch,
            "ragged matrix rows");
    std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
  }
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Vector matvec(const Matrix& a, std::span<const double> x) {
  require(x.size() == a.cols(), ErrorCode::DimensionMismatch, "matvec");
  Vector y(a.rows(), 0.0);
  if (a.rows() > 0 && a.cols() > 0)
    kernels::active().gemv(a.data().data(), a.rows(), a.cols(), x.data(), y.data());
  return y;
}

Vector matvec_t(const Matrix& a, std::span<const double> x) {
  require(x.size() == a.rows(), ErrorCode::DimensionMismatch, "matvec_t");
  Vector y(a.cols(), 0.0);
  if (a.rows() > 0 && a.cols() > 0)
    kernels::active().gemv_t(a.data().data(), a.rows(), a.cols(), x.data(),
                             y.data());
  return y;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  require(a.cols() == b.rows(), ErrorCode::DimensionMismatch, "matmul");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto ci = c.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik != 0.0) kernels::axpy(aik, b.row(k), ci);
    }
  }
  return c;
}

Matrix gram(const Matrix& a) {
  Matrix g(a.cols(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto ai = a.row(i);
    for (std::size_t p = 0; p < a.cols(); ++p) {
      const double v = ai[p];
      if (v == 0.0) continue;
      kernels::axpy(v, ai, g.row(p));
    }
  }
  return g;
}

double dot(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), ErrorCode::DimensionMismatch, "dot");
  return kernels::dot(a, b);
}

double norm(std::span<const double> a) { return std::sqrt(kernels::nrm2_sq(a)); }

double norm_inf(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

double dist(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), ErrorCode::DimensionMismatch, "dist");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

Vector add(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), ErrorCode::DimensionMismatch, "add");
  Vector r(a.begin(), a.end());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

Vector sub(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), ErrorCode::DimensionMismatch, "sub");
  Vector r(a.begin(), a.end());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}

Vector scaled(double alpha, std::span<const double> a) {
  Vector r(a.begin(), a.end());
  for (double& v : r) v *= alpha;
  return r;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  require(x.size() == y.size(), ErrorCode::DimensionMismatch, "axpy");
  kernels::axpy(alpha, x, y);
}

namespace {

// Householder reduction to tridiagonal form (JAMA tred2). On exit v holds the
// accumulated orthogonal transform, d the diagonal, e the subdiagonal.
void tred2(std::size_t n, Matrix& v, Vector& d, Vector& e) {
  for (std::size_t j = 0; j < n; ++j) d[j] = v(n - 1, j);
  for (std::size_t i = n - 1; i > 0; --i) {
    double scale = 0.0;
    double h = 0.0;
    for (std::size_t k = 0; k < i; ++k) scale += std::abs(d[k]);
    if (scale == 0.0) {
      e[i] = d[i - 1];
      for (std::size_t j = 0; j < i; ++j) {
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
        v(j, i) = 0.0;
      }
    } else {
      for (std::size_t k = 0; k < i; ++k) {
        d[k] /= scale;
        h += d[k] * d[k];
      }
      double f = d[i - 1];
      double g = std::sqrt(h);
      if (f > 0) g = -g;
      e[i] = scale * g;
      h -= f * g;
      d[i - 1] = f - g;
      for (std::size_t j = 0; j < i; ++j) e[j] = 0.0;
      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        v(j, i) = f;
        g = e[j] + v(j, j) * f;
        for (std::size_t k = j + 1; k <= i - 1; ++k) {
          g += v(k, j) * d[k];
          e[k] += v(k, j) * f;
        }
        e[j] = g;
      }
      f = 0.0;
      for (std::size_t j = 0; j < i; ++j) {
        e[j] /= h;
        f += e[j] * d[j];
      }
      const double hh = f / (h + h);
      for (std::size_t j = 0; j < i; ++j) e[j] -= hh * d[j];
      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        g = e[j];
        for (std::size_t k = j; k <= i - 1; ++k) v(k, j) -= (f * e[k] + g * d[k]);
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
      }
    }
    d[i] = h;
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    v(n - 1, i) = v(i, i);
    v(i, i) = 1.0;
    const double h = d[i + 1];
    if (h != 0.0) {
      for (std::size_t k = 0; k <= i; ++k) d[k] = v(k, i + 1) / h;
      for (std::size_t j = 0; j <= i; ++j) {
        double g = 0.0;
        for (std::size_t k = 0; k <= i; ++k) g += v(k, i + 1) * v(k, j);
        for (std::size_t k = 0; k <= i; ++k) v(k, j) -= g * d[k];
      }
    }
    for (std::size_t k = 0; k <= i; ++k) v(k, i + 1) = 0.0;
  }
  for (std::size_t j = 0; j < n; ++j) {
    d[j] = v(n - 1, j);
    v(n - 1, j) = 0.0;
  }
  v(n - 1, n - 1) = 1.0;
  e[0] = 0.0;
}

// Implicit QL on the tridiagonal form (JAMA tql2).
void tql2(std::size_t n, Matrix& v, Vector& d, Vector& e) {
  for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;
  double f = 0.0;
  double tst1 = 0.0;
  const double eps = std::ldexp(1.0, -52);
  for (std::size_t l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    std::size_t m = l;
    while (m < n) {
      if (std::abs(e[m]) <= eps * tst1) break;
      ++m;
    }
    if (m == n) m = n - 1;
    if (m > l) {
      int iter = 0;
      do {
        if (++iter > 60) fail(ErrorCode::NoConvergence, "tql2 did not converge");
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
        f += h;
        p = d[m];
        double c = 1.0, c2 = 1.0, c3 = 1.0;
        const double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (std::size_t ii = m; ii-- > l;) {
          const std::size_t i = ii;
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[i];
          h = c * p;
          r = std::hypot(p, e[i]);
          e[i + 1] = s * r;
          s = e[i] / r;
          c = p / r;
          p = c * d[i] - s * g;
          d[i + 1] = h + s * (c * g + s * d[i]);
          for (std::size_t k = 0; k < n; ++k) {
            h = v(k, i + 1);
            v(k, i + 1) = s * v(k, i) + c * h;
            v(k, i) = c * v(k, i) - s * h;
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }
  // Selection sort, ascending.
  for (std::size_t i = 0; i + 1 < n; ++i) {
    std::size_t k = i;
    double p = d[i];
    for (std::size_t j = i + 1; j < n; ++j)
      if (d[j] < p) {
        k = j;
        p = d[j];
      }
    if (k != i) {
      d[k] = d[i];
      d[i] = p;
      for (std::size_t j = 0; j < n; ++j) std::swap(v(j, i), v(j, k));
    }
  }
}

}  // namespace

SymmetricEigen symmetric_eigen(const Matrix& sym) {
  require(sym.rows() == sym.cols(), ErrorCode::DimensionMismatch,
          "symmetric_eigen needs a square matrix");
  const std::size_t n = sym.rows();
  SymmetricEigen out;
  if (n == 0) return out;
  out.vectors = sym;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) {
      const double avg = 0.5 * (sym(i, j) + sym(j, i));
      out.vectors(i, j) = avg;
      out.vectors(j, i) = avg;
    }
  out.values.assign(n, 0.0);
  if (n == 1) {
    out.values[0] = out.vectors(0, 0);
    out.vectors(0, 0) = 1.0;
    return out;
  }
  Vector e(n, 0.0);
  tred2(n, out.vectors, out.values, e);
  tql2(n, out.vectors, out.values, e);
  return out;
}

Vector solve_spd(const Matrix& spd, std::span<const double> rhs) {
  const std::size_t n = spd.rows();
  require(spd.cols() == n && rhs.size() == n, ErrorCode::DimensionMismatch,
          "solve_spd dimensions");
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = spd(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    require(d > 0.0 && std::isfinite(d), ErrorCode::NoConvergence,
            "matrix is not positive definite");
    l(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = spd(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  Vector y(rhs.begin(), rhs.end());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < i; ++k) y[i] -= l(i, k) * y[k];
    y[i] /= l(i, i);
  }
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t k = i + 1; k < n; ++k) y[i] -= l(k, i) * y[k];
    y[i] /= l(i, i);
  }
  return y;
}

Vector singular_values(const Matrix& a) {
  if (a.empty()) return {};
  const Matrix g = a.rows() <= a.cols() ? gram(a.transposed()) : gram(a);
  const auto eig = symmetric_eigen(g);
  Vector s(eig.values.size());
  for (std::size_t i = 0; i < s.size(); ++i)
    s[i] = std::sqrt(std::max(0.0, eig.values[s.size() - 1 - i]));
  return s;
}

double spectral_norm(const Matrix& a) {
  if (a.empty()) return 0.0;
  return singular_values(a).front();
}

double sigma_min(const Matrix& a) {
  if (a.empty()) return 0.0;
  return singular_values(a).back();
}

PowerResult power_iteration(const LinearOp& op, std::size_t dim, double rel_tol,
                            int max_iter, std::span<const double> start) {
  PowerResult res;
  if (dim == 0) {
    res.converged = true;
    return res;
  }
  Vector v(dim);
  if (start.size() == dim && norm(start) > 0.0) {
    v.assign(start.begin(), start.end());
  } else {
    // Deterministic, non-degenerate start.
    for (std::size_t i = 0; i < dim; ++i)
      v[i] = 1.0 + 0.1 * std::sin(static_cast<double>(i + 1));
  }
  double nv = norm(v);
  for (double& t : v) t /= nv;
  Vector w(dim);
  double prev = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    std::fill(w.begin(), w.end(), 0.0);
    op(v, w);
    const double rq = dot(v, w);
    const double nw = norm(w);
    res.iterations = it;
    res.value = rq;
    if (nw == 0.0) {
      res.value = 0.0;
      res.vector = v;
      res.converged = true;
      return res;
    }
    for (std::size_t i = 0; i < dim; ++i) v[i] = w[i] / nw;
    if (it > 1 && std::abs(rq - prev) <= rel_tol * std::max(std::abs(rq), 1e-300)) {
      res.converged = true;
      break;
    }
    prev = rq;
  }
  res.vector = v;
  return res;
}

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::OriginNotInZ: return "OriginNotInZ";
    case ErrorCode::UnsupportedSet: return "UnsupportedSet";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::OracleFailure: return "OracleFailure";
    case ErrorCode::NotStrictlyFeasible: return "NotStrictlyFeasible";
    case ErrorCode::NotBiaffine: return "NotBiaffine";
    case ErrorCode::InvalidSteps: return "InvalidSteps";
    case ErrorCode::BudgetExhausted: return "BudgetExhausted";
    case ErrorCode::TimeBudgetExceeded: return "TimeBudgetExceeded";
    case ErrorCode::RequiresPessimizer: return "RequiresPessimizer";
    case ErrorCode::NonpositiveEps: return "NonpositiveEps";
    case ErrorCode::Unbounded: return "Unbounded";
    case ErrorCode::MasterFailure: return "MasterFailure";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace rsp
