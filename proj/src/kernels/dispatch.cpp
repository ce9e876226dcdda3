#include <cstdlib>
#include <string_view>

#include "kernels_internal.hpp"
#include "warpcurv/errors.hpp"

namespace warpcurv::kernels {

const KernelTable* avx2() {
#if defined(WARPCURV_HAVE_AVX2)
  static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok ? detail::avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable* neon() { return detail::neon_table(); }

std::vector<const KernelTable*> available() {
  std::vector<const KernelTable*> out{&scalar()};
  if (const auto* t = avx2()) out.push_back(t);
  if (const auto* t = neon()) out.push_back(t);
  return out;
}

namespace {

const KernelTable& resolve() {
  const char* env = std::getenv("WARPCURV_KERNELS");
  if (env != nullptr && *env != '\0') {
    const std::string_view want(env);
    for (const auto* t : available()) {
      if (want == t->name) return *t;
    }
    throw ConfigError("WARPCURV_KERNELS=" + std::string(want) + " is not available here");
  }
  return *available().back();
}

}  // namespace

const KernelTable& active() {
  static const KernelTable& table = resolve();
  return table;
}

}  // namespace warpcurv::kernels
