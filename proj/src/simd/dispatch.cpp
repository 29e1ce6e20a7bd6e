#include "newtonpoly/simd/kernels.hpp"

#include <cstdlib>
#include <string_view>

namespace npoly::simd {

#if defined(NEWTONPOLY_HAVE_AVX2)
const KernelTable* avx2_table_impl();
#endif

const KernelTable* avx2_kernels() {
#if defined(NEWTONPOLY_HAVE_AVX2)
  static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok ? avx2_table_impl() : nullptr;
#else
  return nullptr;
#endif
}

namespace {
const KernelTable& select() {
  const char* env = std::getenv("NEWTONPOLY_SIMD");
  if (env && std::string_view(env) == "scalar") return scalar_kernels();
  if (const KernelTable* t = avx2_kernels()) return *t;
  return scalar_kernels();
}
}  // namespace

const KernelTable& kernels() {
  static const KernelTable& chosen = select();
  return chosen;
}

Isa active_isa() { return &kernels() == &scalar_kernels() ? Isa::scalar : Isa::avx2; }

}  // namespace npoly::simd
