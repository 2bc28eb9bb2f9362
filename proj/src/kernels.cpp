#include "rgm/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace rgm::kernels {

bool avx2_available() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

namespace {

std::atomic<const Ops*> g_active{nullptr};

const Ops* resolve(Backend b) {
#if defined(__x86_64__) || defined(_M_X64)
  if (b == Backend::Avx2) return &avx2_ops;
  if (b == Backend::Auto && avx2_available()) return &avx2_ops;
#endif
  return &scalar_ops;
}

const Ops* resolve_default() {
  if (const char* env = std::getenv("RGM_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return resolve(Backend::Scalar);
    if (std::strcmp(env, "avx2") == 0) return resolve(Backend::Avx2);
  }
  return resolve(Backend::Auto);
}

}  // namespace

const Ops& active() {
  const Ops* p = g_active.load(std::memory_order_acquire);
  if (!p) {
    p = resolve_default();
    g_active.store(p, std::memory_order_release);
  }
  return *p;
}

void set_backend(Backend b) {
  g_active.store(b == Backend::Auto ? resolve_default() : resolve(b),
                 std::memory_order_release);
}

Backend active_backend() {
  return &active() == &scalar_ops ? Backend::Scalar : Backend::Avx2;
}

}  // namespace rgm::kernels
