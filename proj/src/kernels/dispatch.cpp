#include <cstdlib>
#include <string>

#include "mnls/kernels.hpp"

namespace mnls::kernels {

#if defined(MNLS_HAVE_AVX2)
namespace {

bool cpu_has_avx2() {
#if defined(__GNUC__) || defined(__clang__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

}  // namespace
#endif

std::vector<const KernelTable*> available() {
  std::vector<const KernelTable*> out{&scalar_table()};
#if defined(MNLS_HAVE_AVX2)
  if (cpu_has_avx2()) out.push_back(&avx2_table());
#endif
#if defined(MNLS_HAVE_NEON)
  out.push_back(&neon_table());
#endif
  return out;
}

const KernelTable* find(std::string_view name) {
  for (const auto* t : available())
    if (name == t->name) return t;
  return nullptr;
}

const KernelTable& active() {
  static const KernelTable* chosen = [] {
    if (const char* env = std::getenv("MNLS_KERNELS")) {
      const auto* t = find(env);
      return t ? t : &scalar_table();
    }
    return available().back();
  }();
  return *chosen;
}

}  // namespace mnls::kernels
