#include <cstdlib>
#include <string_view>

#include "rsk/kernels.hpp"

namespace rsk::kernels {

std::string_view backend_name(Backend b) noexcept {
  switch (b) {
    case Backend::kScalar: return "scalar";
    case Backend::kAvx2: return "avx2";
    case Backend::kNeon: return "neon";
  }
  return "unknown";
}

const KernelTable* table_for(Backend b) noexcept {
  switch (b) {
    case Backend::kScalar:
      return &scalar_table();
    case Backend::kAvx2:
#if defined(RSK_HAVE_AVX2)
      if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
        return &detail::avx2_table();
      }
#endif
      return nullptr;
    case Backend::kNeon:
#if defined(RSK_HAVE_NEON)
      return &detail::neon_table();
#else
      return nullptr;
#endif
  }
  return nullptr;
}

namespace {

const KernelTable& select() noexcept {
  if (const char* env = std::getenv("RSK_KERNELS"); env && std::string_view(env) == "scalar") {
    return scalar_table();
  }
  for (Backend b : {Backend::kAvx2, Backend::kNeon}) {
    if (const KernelTable* t = table_for(b)) return *t;
  }
  return scalar_table();
}

}  // namespace

const KernelTable& active() noexcept {
  static const KernelTable& table = select();
  return table;
}

}  // namespace rsk::kernels
