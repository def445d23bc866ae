#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "aam/numeric/kernels.hpp"

namespace aam::numeric::kernels {
namespace {

bool cpu_supports(Backend backend) {
  switch (backend) {
    case Backend::scalar:
      return true;
    case Backend::avx2:
#if defined(__x86_64__) || defined(_M_X64) || defined(__i386__)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Backend::neon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable* initial_table() {
  Backend backend = best_available();
  if (const char* env = std::getenv("AAM_KERNELS"); env && *env) {
    backend = backend_from_string(env);
  }
  return &table(backend);
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> ptr{initial_table()};
  return ptr;
}

}  // namespace

std::string_view to_string(Backend backend) {
  switch (backend) {
    case Backend::scalar:
      return "scalar";
    case Backend::avx2:
      return "avx2";
    case Backend::neon:
      return "neon";
  }
  return "unknown";
}

Backend backend_from_string(std::string_view name) {
  if (name == "scalar") return Backend::scalar;
  if (name == "avx2") return Backend::avx2;
  if (name == "neon") return Backend::neon;
  throw std::invalid_argument("unknown kernel backend '" + std::string(name) + "'");
}

bool is_available(Backend backend) { return cpu_supports(backend); }

std::vector<Backend> available_backends() {
  std::vector<Backend> out{Backend::scalar};
  for (Backend b : {Backend::avx2, Backend::neon}) {
    if (is_available(b)) out.push_back(b);
  }
  return out;
}

Backend best_available() { return available_backends().back(); }

const KernelTable& table(Backend backend) {
  if (!is_available(backend)) {
    throw std::invalid_argument("kernel backend '" + std::string(to_string(backend)) +
                                "' is not available on this CPU/build");
  }
  switch (backend) {
#if defined(__x86_64__) || defined(_M_X64) || defined(__i386__)
    case Backend::avx2:
      return detail::avx2_table();
#endif
#if defined(__aarch64__)
    case Backend::neon:
      return detail::neon_table();
#endif
    default:
      return detail::scalar_table();
  }
}

const KernelTable& active() { return *current().load(std::memory_order_acquire); }

void select(Backend backend) { current().store(&table(backend), std::memory_order_release); }

}  // namespace aam::numeric::kernels
