#include "aam/numeric/kernels.hpp"

namespace aam::numeric::kernels::detail {
namespace {

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void matmul_nt(const double* a, const double* w, const double* bias, double* c, std::size_t rows,
               std::size_t n_in, std::size_t n_out) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double* ar = a + r * n_in;
    double* cr = c + r * n_out;
    for (std::size_t o = 0; o < n_out; ++o) {
      const double* wo = w + o * n_in;
      double s = bias ? bias[o] : 0.0;
      for (std::size_t i = 0; i < n_in; ++i) s += ar[i] * wo[i];
      cr[o] = s;
    }
  }
}

void matmul_nn_acc(const double* a, const double* w, double* c, std::size_t rows,
                   std::size_t n_out, std::size_t n_in) {
  for (std::size_t r = 0; r < rows; ++r) {
    double* cr = c + r * n_in;
    for (std::size_t o = 0; o < n_out; ++o) {
      const double s = a[r * n_out + o];
      if (s == 0.0) continue;
      const double* wo = w + o * n_in;
      for (std::size_t i = 0; i < n_in; ++i) cr[i] += s * wo[i];
    }
  }
}

void matmul_tn_acc(const double* a, const double* b, double* g, std::size_t rows,
                   std::size_t n_out, std::size_t n_in) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double* br = b + r * n_in;
    for (std::size_t o = 0; o < n_out; ++o) {
      const double s = a[r * n_out + o];
      if (s == 0.0) continue;
      double* go = g + o * n_in;
      for (std::size_t i = 0; i < n_in; ++i) go[i] += s * br[i];
    }
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{Backend::scalar, "scalar", dot, axpy, matmul_nt, matmul_nn_acc,
                                 matmul_tn_acc};
  return table;
}

}  // namespace aam::numeric::kernels::detail
