// AVX2 + FMA variants. This translation unit is compiled with -mavx2 -mfma and
// must only be entered after the dispatcher has confirmed CPU support.

#include <immintrin.h>

#include <algorithm>
#include <vector>

#include "aam/numeric/kernels.hpp"

namespace aam::numeric::kernels::detail {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

// Lane j of the result holds the horizontal sum of input j.
inline __m256d hsum4(__m256d a, __m256d b, __m256d c, __m256d d) {
  __m256d ab = _mm256_hadd_pd(a, b);
  __m256d cd = _mm256_hadd_pd(c, d);
  __m256d lo = _mm256_permute2f128_pd(ab, cd, 0x20);
  __m256d hi = _mm256_permute2f128_pd(ab, cd, 0x31);
  return _mm256_add_pd(lo, hi);
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d s0 = _mm256_setzero_pd();
  __m256d s1 = _mm256_setzero_pd();
  __m256d s2 = _mm256_setzero_pd();
  __m256d s3 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), s0);
    s1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), s1);
    s2 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 8), _mm256_loadu_pd(b + i + 8), s2);
    s3 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 12), _mm256_loadu_pd(b + i + 12), s3);
  }
  for (; i + 4 <= n; i += 4) {
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), s0);
  }
  double s = hsum(_mm256_add_pd(_mm256_add_pd(s0, s1), _mm256_add_pd(s2, s3)));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

// C[m, n] += sum_p A(m, p) * B[p, n], with A(m, p) = a[m * sam + p * sap].
// Register-blocked over 4 x 8 tiles of C.
void gemm_acc(const double* a, std::size_t sam, std::size_t sap, const double* b, std::size_t ldb, double* c,
              std::size_t ldc, std::size_t M, std::size_t N, std::size_t P) {
  std::size_t m = 0;
  for (; m + 4 <= M; m += 4) {
    const double* a0 = a + m * sam;
    const double* a1 = a0 + sam;
    const double* a2 = a1 + sam;
    const double* a3 = a2 + sam;
    double* c0 = c + m * ldc;
    double* c1 = c0 + ldc;
    double* c2 = c1 + ldc;
    double* c3 = c2 + ldc;
    std::size_t n = 0;
    for (; n + 8 <= N; n += 8) {
      __m256d x00 = _mm256_loadu_pd(c0 + n), x01 = _mm256_loadu_pd(c0 + n + 4);
      __m256d x10 = _mm256_loadu_pd(c1 + n), x11 = _mm256_loadu_pd(c1 + n + 4);
      __m256d x20 = _mm256_loadu_pd(c2 + n), x21 = _mm256_loadu_pd(c2 + n + 4);
      __m256d x30 = _mm256_loadu_pd(c3 + n), x31 = _mm256_loadu_pd(c3 + n + 4);
      for (std::size_t p = 0; p < P; ++p) {
        const double* bp = b + p * ldb + n;
        const __m256d b0 = _mm256_loadu_pd(bp);
        const __m256d b1 = _mm256_loadu_pd(bp + 4);
        __m256d v = _mm256_broadcast_sd(a0 + p * sap);
        x00 = _mm256_fmadd_pd(v, b0, x00);
        x01 = _mm256_fmadd_pd(v, b1, x01);
        v = _mm256_broadcast_sd(a1 + p * sap);
        x10 = _mm256_fmadd_pd(v, b0, x10);
        x11 = _mm256_fmadd_pd(v, b1, x11);
        v = _mm256_broadcast_sd(a2 + p * sap);
        x20 = _mm256_fmadd_pd(v, b0, x20);
        x21 = _mm256_fmadd_pd(v, b1, x21);
        v = _mm256_broadcast_sd(a3 + p * sap);
        x30 = _mm256_fmadd_pd(v, b0, x30);
        x31 = _mm256_fmadd_pd(v, b1, x31);
      }
      _mm256_storeu_pd(c0 + n, x00), _mm256_storeu_pd(c0 + n + 4, x01);
      _mm256_storeu_pd(c1 + n, x10), _mm256_storeu_pd(c1 + n + 4, x11);
      _mm256_storeu_pd(c2 + n, x20), _mm256_storeu_pd(c2 + n + 4, x21);
      _mm256_storeu_pd(c3 + n, x30), _mm256_storeu_pd(c3 + n + 4, x31);
    }
    for (; n + 4 <= N; n += 4) {
      __m256d x0 = _mm256_loadu_pd(c0 + n), x1 = _mm256_loadu_pd(c1 + n);
      __m256d x2 = _mm256_loadu_pd(c2 + n), x3 = _mm256_loadu_pd(c3 + n);
      for (std::size_t p = 0; p < P; ++p) {
        const __m256d bv = _mm256_loadu_pd(b + p * ldb + n);
        x0 = _mm256_fmadd_pd(_mm256_broadcast_sd(a0 + p * sap), bv, x0);
        x1 = _mm256_fmadd_pd(_mm256_broadcast_sd(a1 + p * sap), bv, x1);
        x2 = _mm256_fmadd_pd(_mm256_broadcast_sd(a2 + p * sap), bv, x2);
        x3 = _mm256_fmadd_pd(_mm256_broadcast_sd(a3 + p * sap), bv, x3);
      }
      _mm256_storeu_pd(c0 + n, x0), _mm256_storeu_pd(c1 + n, x1);
      _mm256_storeu_pd(c2 + n, x2), _mm256_storeu_pd(c3 + n, x3);
    }
    for (; n < N; ++n) {
      double s0 = c0[n], s1 = c1[n], s2 = c2[n], s3 = c3[n];
      for (std::size_t p = 0; p < P; ++p) {
        const double bv = b[p * ldb + n];
        s0 += a0[p * sap] * bv;
        s1 += a1[p * sap] * bv;
        s2 += a2[p * sap] * bv;
        s3 += a3[p * sap] * bv;
      }
      c0[n] = s0, c1[n] = s1, c2[n] = s2, c3[n] = s3;
    }
  }
  for (; m < M; ++m) {
    const double* am = a + m * sam;
    double* cm = c + m * ldc;
    std::size_t n = 0;
    for (; n + 8 <= N; n += 8) {
      __m256d x0 = _mm256_loadu_pd(cm + n), x1 = _mm256_loadu_pd(cm + n + 4);
      for (std::size_t p = 0; p < P; ++p) {
        const __m256d v = _mm256_broadcast_sd(am + p * sap);
        x0 = _mm256_fmadd_pd(v, _mm256_loadu_pd(b + p * ldb + n), x0);
        x1 = _mm256_fmadd_pd(v, _mm256_loadu_pd(b + p * ldb + n + 4), x1);
      }
      _mm256_storeu_pd(cm + n, x0), _mm256_storeu_pd(cm + n + 4, x1);
    }
    for (; n + 4 <= N; n += 4) {
      __m256d x0 = _mm256_loadu_pd(cm + n);
      for (std::size_t p = 0; p < P; ++p) {
        x0 = _mm256_fmadd_pd(_mm256_broadcast_sd(am + p * sap), _mm256_loadu_pd(b + p * ldb + n), x0);
      }
      _mm256_storeu_pd(cm + n, x0);
    }
    for (; n < N; ++n) {
      double acc = cm[n];
      for (std::size_t p = 0; p < P; ++p) acc += am[p * sap] * b[p * ldb + n];
      cm[n] = acc;
    }
  }
}

void matmul_nt(const double* a, const double* w, const double* bias, double* c, std::size_t rows,
               std::size_t n_in, std::size_t n_out) {
  if (rows == 1 || n_out < 4) {
    // A single row (or output) gains nothing from the transposed layout.
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t o = 0; o < n_out; ++o) {
        c[r * n_out + o] = (bias ? bias[o] : 0.0) + dot(a + r * n_in, w + o * n_in, n_in);
      }
    }
    return;
  }
  thread_local std::vector<double> wt;
  wt.resize(n_in * n_out);
  for (std::size_t o = 0; o < n_out; ++o) {
    for (std::size_t i = 0; i < n_in; ++i) wt[i * n_out + o] = w[o * n_in + i];
  }
  for (std::size_t r = 0; r < rows; ++r) {
    double* cr = c + r * n_out;
    if (bias) {
      std::copy(bias, bias + n_out, cr);
    } else {
      std::fill(cr, cr + n_out, 0.0);
    }
  }
  gemm_acc(a, n_in, 1, wt.data(), n_out, c, n_out, rows, n_out, n_in);
}

void matmul_nn_acc(const double* a, const double* w, double* c, std::size_t rows,
                   std::size_t n_out, std::size_t n_in) {
  gemm_acc(a, n_out, 1, w, n_in, c, n_in, rows, n_in, n_out);
}

void matmul_tn_acc(const double* a, const double* b, double* g, std::size_t rows,
                   std::size_t n_out, std::size_t n_in) {
  gemm_acc(a, 1, n_out, b, n_in, g, n_in, n_out, n_in, rows);
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable table{Backend::avx2, "avx2", dot, axpy, matmul_nt, matmul_nn_acc,
                                 matmul_tn_acc};
  return table;
}

}  // namespace aam::numeric::kernels::detail
