#include "qcap/kernels.hpp"

// Reference kernels. Loop orders are mirrored by the AVX2 variant so the two
// differ only in summation width, never in which products are formed.

namespace qcap::kernels {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale_scalar(double* x, double alpha, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

double sum_sq_scalar(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
  return acc;
}

void matmul_nn_scalar(const double* a, const double* b, double* c, int m, int k, int n) {
  for (int i = 0; i < m; ++i) {
    double* crow = c + static_cast<std::size_t>(i) * n;
    for (int j = 0; j < n; ++j) crow[j] = 0.0;
    for (int l = 0; l < k; ++l) {
      const double aval = a[static_cast<std::size_t>(i) * k + l];
      const double* brow = b + static_cast<std::size_t>(l) * n;
      for (int j = 0; j < n; ++j) crow[j] += aval * brow[j];
    }
  }
}

void matmul_nt_scalar(const double* a, const double* b, double* c, int m, int k, int n) {
  for (int i = 0; i < m; ++i) {
    const double* arow = a + static_cast<std::size_t>(i) * k;
    double* crow = c + static_cast<std::size_t>(i) * n;
    for (int j = 0; j < n; ++j)
      crow[j] = dot_scalar(arow, b + static_cast<std::size_t>(j) * k, static_cast<std::size_t>(k));
  }
}

void matmul_tn_scalar(const double* a, const double* b, double* c, int m, int k, int n) {
  for (std::size_t i = 0; i < static_cast<std::size_t>(m) * n; ++i) c[i] = 0.0;
  for (int l = 0; l < k; ++l) {
    const double* arow = a + static_cast<std::size_t>(l) * m;
    const double* brow = b + static_cast<std::size_t>(l) * n;
    for (int i = 0; i < m; ++i) {
      const double aval = arow[i];
      double* crow = c + static_cast<std::size_t>(i) * n;
      for (int j = 0; j < n; ++j) crow[j] += aval * brow[j];
    }
  }
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops = {
      "scalar",        dot_scalar,       axpy_scalar,      scale_scalar,
      sum_sq_scalar,   matmul_nn_scalar, matmul_nt_scalar, matmul_tn_scalar,
  };
  return ops;
}

}  // namespace qcap::kernels
