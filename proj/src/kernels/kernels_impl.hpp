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

#include <cstddef>

namespace rsp::kernels {

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void gemv(const double* a, std::size_t rows, std::size_t cols, const double* x,
          double* y);
void gemv_t(const double* a, std::size_t rows, std::size_t cols,
            const double* x, double* y);
}  // namespace scalar

#if defined(RSP_HAVE_AVX2_TU)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void gemv(const double* a, std::size_t rows, std::size_t cols, const double* x,
          double* y);
void gemv_t(const double* a, std::size_t rows, std::size_t cols,
            const double* x, double* y);
}  // namespace avx2
#endif

#if defined(RSP_HAVE_NEON_TU)
namespace neon {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void gemv(const double* a, std::size_t rows, std::size_t cols, const double* x,
          double* y);
void gemv_t(const double* a, std::size_t rows, std::size_t cols,
            const double* x, double* y);
}  // namespace neon
#endif

}  // namespace rsp::kernels
