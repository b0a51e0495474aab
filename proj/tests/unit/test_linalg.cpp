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

#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "rsp/error.hpp"
#include "rsp/linalg.hpp"

using namespace rsp;

namespace {

Matrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix m(r, c);
  for (double& v : m.data()) v = u(rng);
  return m;
}

Matrix random_symmetric(std::mt19937_64& rng, std::size_t n) {
  Matrix a = random_matrix(rng, n, n);
  Matrix s(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) s(i, j) = 0.5 * (a(i, j) + a(j, i));
  return s;
}

}  // namespace

TEST_CASE("matvec, transpose and gram") {
  const Matrix a = Matrix::from_rows({{1, 2}, {3, 4}, {5, 6}});
  const Vector y = matvec(a, Vector{1, -1});
  CHECK(y == Vector{-1, -1, -1});
  const Vector t = matvec_t(a, Vector{1, 0, 1});
  CHECK(t == Vector{6, 8});
  const Matrix g = gram(a);
  CHECK(g(0, 0) == 35.0);
  CHECK(g(0, 1) == 44.0);
  CHECK(g(1, 1) == 56.0);
  CHECK(matmul(a.transposed(), a) == g);
}

TEST_CASE("symmetric eigen matches the Jacobi oracle") {
  std::mt19937_64 rng(3);
  for (std::size_t n : {1u, 2u, 5u, 8u, 12u}) {
    const Matrix s = random_symmetric(rng, n);
    const SymmetricEigen e = symmetric_eigen(s);
    const Vector ref = oracles::jacobi_eigenvalues(s);
    for (std::size_t i = 0; i < n; ++i) CHECK(e.values[i] == doctest::Approx(ref[i]).epsilon(1e-10));
    // A v = lambda v for every pair.
    for (std::size_t j = 0; j < n; ++j) {
      Vector v(n);
      for (std::size_t i = 0; i < n; ++i) v[i] = e.vectors(i, j);
      const Vector av = matvec(s, v);
      for (std::size_t i = 0; i < n; ++i) CHECK(av[i] == doctest::Approx(e.values[j] * v[i]).epsilon(1e-9).scale(1.0));
    }
  }
}

TEST_CASE("singular values match the Jacobi oracle") {
  std::mt19937_64 rng(5);
  for (auto [r, c] : {std::pair{3u, 5u}, {6u, 2u}, {4u, 4u}}) {
    const Matrix a = random_matrix(rng, r, c);
    const Vector sv = singular_values(a);
    const Vector ref = oracles::jacobi_singular_values(a);
    const std::size_t k = std::min(r, c);
    REQUIRE(sv.size() >= k);
    for (std::size_t i = 0; i < k; ++i) CHECK(sv[i] == doctest::Approx(ref[i]).epsilon(1e-9));
    CHECK(spectral_norm(a) == doctest::Approx(ref[0]).epsilon(1e-9));
  }
}

TEST_CASE("cholesky solve") {
  std::mt19937_64 rng(9);
  const Matrix a = random_matrix(rng, 6, 6);
  Matrix s = gram(a);
  for (std::size_t i = 0; i < 6; ++i) s(i, i) += 0.5;
  const Vector x_true{1, -2, 3, 0.5, -1, 2};
  const Vector b = matvec(s, x_true);
  const Vector x = solve_spd(s, b);
  for (std::size_t i = 0; i < 6; ++i) CHECK(x[i] == doctest::Approx(x_true[i]).epsilon(1e-10));
  Matrix bad = Matrix::identity(2);
  bad(1, 1) = -1.0;
  CHECK_THROWS_AS(solve_spd(bad, Vector{1, 1}), Error);
}

TEST_CASE("power iteration finds the top eigenvalue of a PSD operator") {
  const Matrix d = Matrix::from_rows({{3, 0, 0}, {0, 1, 0}, {0, 0, 2}});
  const PowerResult r = power_iteration(
      [&](std::span<const double> x, std::span<double> y) {
        const Vector v = matvec(d, x);
        std::copy(v.begin(), v.end(), y.begin());
      },
      3, 1e-12, 10000);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("vector helpers") {
  const Vector a{3, 4}, b{1, 1};
  CHECK(norm(a) == 5.0);
  CHECK(norm_inf(Vector{-7, 2}) == 7.0);
  CHECK(dist(a, b) == doctest::Approx(std::sqrt(13.0)));
  CHECK(add(a, b) == Vector{4, 5});
  CHECK(sub(a, b) == Vector{2, 3});
  CHECK(scaled(2.0, a) == Vector{6, 8});
  Vector y = b;
  axpy(2.0, a, y);
  CHECK(y == Vector{7, 9});
}
