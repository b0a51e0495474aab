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

#include <cstdlib>
#include <string_view>

#include "kernels_impl.hpp"
#include "rsp/kernels.hpp"

namespace rsp::kernels {

namespace {

constexpr KernelTable kScalarTable{&scalar::dot, &scalar::axpy, &scalar::gemv,
                                   &scalar::gemv_t};

#if defined(RSP_HAVE_AVX2_TU)
constexpr KernelTable kAvx2Table{&avx2::dot, &avx2::axpy, &avx2::gemv,
                                 &avx2::gemv_t};
#endif

#if defined(RSP_HAVE_NEON_TU)
constexpr KernelTable kNeonTable{&neon::dot, &neon::axpy, &neon::gemv,
                                 &neon::gemv_t};
#endif

Isa select_isa() {
  if (const char* env = std::getenv("RSP_KERNELS")) {
    if (std::string_view(env) == "scalar") return Isa::Scalar;
  }
  return simd_isa();
}

}  // namespace

bool cpu_has_avx2() {
#if defined(RSP_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

bool cpu_has_neon() {
#if defined(RSP_HAVE_NEON_TU)
  return true;
#else
  return false;
#endif
}

Isa simd_isa() {
  if (cpu_has_avx2()) return Isa::Avx2;
  if (cpu_has_neon()) return Isa::Neon;
  return Isa::Scalar;
}

const KernelTable& table_for(Isa isa) {
#if defined(RSP_HAVE_AVX2_TU)
  if (isa == Isa::Avx2 && cpu_has_avx2()) return kAvx2Table;
#endif
#if defined(RSP_HAVE_NEON_TU)
  if (isa == Isa::Neon) return kNeonTable;
#endif
  (void)isa;
  return kScalarTable;
}

Isa active_isa() {
  static const Isa isa = select_isa();
  return isa;
}

const KernelTable& active() {
  static const KernelTable& t = table_for(active_isa());
  return t;
}

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
    default: return "scalar";
  }
}

}  // namespace rsp::kernels
