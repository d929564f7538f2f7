#include <atomic>
#include <cstdlib>
#include <string>

#include "corticarc/simd/kernels.hpp"

namespace corticarc::simd {

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::avx512: return "avx512";
  }
  return "unknown";
}

std::optional<Isa> parse_isa(std::string_view name) {
  if (name == "scalar") return Isa::scalar;
  if (name == "avx2") return Isa::avx2;
  if (name == "avx512") return Isa::avx512;
  return std::nullopt;
}

const KernelTable* kernels_for(Isa isa) {
  switch (isa) {
    case Isa::scalar: return &detail::kScalarKernels;
#if defined(CORTICARC_HAVE_X86_KERNELS)
    case Isa::avx2:
      if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("bmi2")) return &detail::kAvx2Kernels;
      return nullptr;
    case Isa::avx512:
      if (__builtin_cpu_supports("avx512f") && __builtin_cpu_supports("bmi2")) return &detail::kAvx512Kernels;
      return nullptr;
#else
    default: return nullptr;
#endif
  }
  return nullptr;
}

namespace {

const KernelTable* pick_default() {
  if (const char* env = std::getenv("CORTICARC_SIMD")) {
    if (auto isa = parse_isa(env)) {
      if (const KernelTable* table = kernels_for(*isa)) return table;
    }
  }
  for (Isa isa : {Isa::avx512, Isa::avx2}) {
    if (const KernelTable* table = kernels_for(isa)) return table;
  }
  return &detail::kScalarKernels;
}

std::atomic<const KernelTable*>& active() {
  static std::atomic<const KernelTable*> table{pick_default()};
  return table;
}

}  // namespace

const KernelTable& kernels() { return *active().load(std::memory_order_acquire); }

bool select(Isa isa) {
  const KernelTable* table = kernels_for(isa);
  if (table == nullptr) return false;
  active().store(table, std::memory_order_release);
  return true;
}

}  // namespace corticarc::simd
