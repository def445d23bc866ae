// NEON (AArch64 Advanced SIMD) variants, two doubles per register.

#include <arm_neon.h>

#include "aam/numeric/kernels.hpp"

namespace aam::numeric::kernels::detail {
namespace {

double dot(const double* a, const double* b, std::size_t n) {
  float64x2_t s0 = vdupq_n_f64(0.0);
  float64x2_t s1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 = vfmaq_f64(s0, vld1q_f64(a + i), vld1q_f64(b + i));
    s1 = vfmaq_f64(s1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double s = vaddvq_f64(vaddq_f64(s0, s1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void matmul_nt(const double* a, const double* w, const double* bias, double* c, std::size_t rows,
               std::size_t n_in, std::size_t n_out) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double* ar = a + r * n_in;
    double* cr = c + r * n_out;
    for (std::size_t o = 0; o < n_out; ++o) cr[o] = (bias ? bias[o] : 0.0) + dot(ar, w + o * n_in, n_in);
  }
}

void matmul_nn_acc(const double* a, const double* w, double* c, std::size_t rows,
                   std::size_t n_out, std::size_t n_in) {
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t o = 0; o < n_out; ++o) {
      const double s = a[r * n_out + o];
      if (s != 0.0) axpy(s, w + o * n_in, c + r * n_in, n_in);
    }
  }
}

void matmul_tn_acc(const double* a, const double* b, double* g, std::size_t rows,
                   std::size_t n_out, std::size_t n_in) {
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t o = 0; o < n_out; ++o) {
      const double s = a[r * n_out + o];
      if (s != 0.0) axpy(s, b + r * n_in, g + o * n_in, n_in);
    }
  }
}

}  // namespace

const KernelTable& neon_table() {
  static const KernelTable table{Backend::neon, "neon", dot, axpy, matmul_nt, matmul_nn_acc,
                                 matmul_tn_acc};
  return table;
}

}  // namespace aam::numeric::kernels::detail
