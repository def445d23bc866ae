#pragma once

// Dense double-precision kernels behind every matrix product in the model.
//
// Each kernel has a scalar reference implementation plus SIMD variants
// (AVX2+FMA on x86-64, NEON on AArch64). The active table is picked once at
// startup from CPU features and can be overridden with select() or the
// AAM_KERNELS environment variable ("scalar", "avx2", "neon"). SIMD variants
// reassociate sums, so results agree with the scalar path to rounding, not
// bitwise; a fixed backend is bit-reproducible run to run.
//
// All matrices are row-major and densely packed.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace aam::numeric::kernels {

enum class Backend { scalar, avx2, neon };

struct KernelTable {
  Backend backend;
  const char* name;

  double (*dot)(const double* a, const double* b, std::size_t n);

  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);

  // c[r, o] = bias[o] + sum_i a[r, i] * w[o, i]
  // a: rows x n_in, w: n_out x n_in, c: rows x n_out; bias may be null.
  void (*matmul_nt)(const double* a, const double* w, const double* bias, double* c,
                    std::size_t rows, std::size_t n_in, std::size_t n_out);

  // c[r, i] += sum_o a[r, o] * w[o, i]
  // a: rows x n_out, w: n_out x n_in, c: rows x n_in.
  void (*matmul_nn_acc)(const double* a, const double* w, double* c, std::size_t rows,
                        std::size_t n_out, std::size_t n_in);

  // g[o, i] += sum_r a[r, o] * b[r, i]
  // a: rows x n_out, b: rows x n_in, g: n_out x n_in.
  void (*matmul_tn_acc)(const double* a, const double* b, double* g, std::size_t rows,
                        std::size_t n_out, std::size_t n_in);
};

const KernelTable& active();

// Backends compiled in and supported by the running CPU; scalar is always first.
std::vector<Backend> available_backends();

bool is_available(Backend backend);

// Throws std::invalid_argument if the backend is not available.
const KernelTable& table(Backend backend);

// Switches the process-wide active table. Not synchronized with concurrent kernel calls.
void select(Backend backend);

Backend best_available();

std::string_view to_string(Backend backend);
Backend backend_from_string(std::string_view name);

// RAII override used by equivalence tests.
class ScopedBackend {
 public:
  explicit ScopedBackend(Backend backend) : previous_(active().backend) { select(backend); }
  ~ScopedBackend() { select(previous_); }
  ScopedBackend(const ScopedBackend&) = delete;
  ScopedBackend& operator=(const ScopedBackend&) = delete;

 private:
  Backend previous_;
};

namespace detail {
const KernelTable& scalar_table();
#if defined(__x86_64__) || defined(_M_X64) || defined(__i386__)
const KernelTable& avx2_table();
#endif
#if defined(__aarch64__)
const KernelTable& neon_table();
#endif
}  // namespace detail

}  // namespace aam::numeric::kernels
