#include <atomic>

#include "kernels_impl.hpp"

namespace focuss::kernels {

namespace {

const KernelTable kScalar{Backend::Scalar, "scalar", scalar::dot, scalar::gemv, scalar::gemv_t,
                          scalar::weighted_gram};

#ifdef FOCUSS_HAVE_AVX2
const KernelTable kAvx2{Backend::Avx2, "avx2", avx2::dot, avx2::gemv, avx2::gemv_t,
                        avx2::weighted_gram};
#endif

const KernelTable* detect() {
#ifdef FOCUSS_HAVE_AVX2
  if (cpu_supports_avx2()) return &kAvx2;
#endif
  return &kScalar;
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{detect()};
  return table;
}

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

const KernelTable* avx2_table() {
#ifdef FOCUSS_HAVE_AVX2
  return &kAvx2;
#else
  return nullptr;
#endif
}

bool cpu_supports_avx2() {
#if defined(__GNUC__) && (defined(__x86_64__) || defined(__i386__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& active() { return *current().load(std::memory_order_relaxed); }

bool select_backend(Backend backend) {
  if (backend == Backend::Scalar) {
    current().store(&kScalar);
    return true;
  }
  const KernelTable* t = avx2_table();
  if (t == nullptr || !cpu_supports_avx2()) return false;
  current().store(t);
  return true;
}

}  // namespace focuss::kernels
