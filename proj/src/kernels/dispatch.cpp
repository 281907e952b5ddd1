#include <atomic>

#include "softedge/kernels.hpp"

namespace softedge::kernels {

#if defined(SOFTEDGE_HAVE_AVX2)
const KernelTable* avx2_kernel_table() noexcept;
#endif

namespace {

#if defined(SOFTEDGE_HAVE_AVX2)
bool cpu_has_avx2() noexcept {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
}
#endif

const KernelTable& best_available() noexcept {
  if (const KernelTable* t = avx2_kernels()) return *t;
  return scalar_kernels();
}

std::atomic<const KernelTable*>& selected() noexcept {
  static std::atomic<const KernelTable*> table{&best_available()};
  return table;
}

}  // namespace

std::string_view to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "?";
}

const KernelTable* avx2_kernels() noexcept {
#if defined(SOFTEDGE_HAVE_AVX2)
  static const bool supported = cpu_has_avx2();
  return supported ? avx2_kernel_table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() noexcept { return *selected().load(std::memory_order_acquire); }

bool force_isa(Isa isa) noexcept {
  const KernelTable* t = isa == Isa::Scalar ? &scalar_kernels() : avx2_kernels();
  if (t == nullptr) return false;
  selected().store(t, std::memory_order_release);
  return true;
}

void reset_isa() noexcept { selected().store(&best_available(), std::memory_order_release); }

}  // namespace softedge::kernels
