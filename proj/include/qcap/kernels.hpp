#pragma once

// Low-level dense kernels behind all matrix arithmetic in qcap.
//
// Two implementations of the same table: a portable scalar reference and an
// AVX2/FMA variant compiled only on x86_64. The active table is chosen once,
// at first use, from CPU support; QCAP_KERNELS=scalar|avx2 in the environment
// or force_backend() overrides the choice. Both variants must agree to
// rounding error; tests/test_kernels.cpp holds the equivalence suite.
//
// All matrices are dense row-major double arrays. Matmul overwrites C.

#include <cstddef>

namespace qcap::kernels {

using DotFn = double (*)(const double* x, const double* y, std::size_t n);
using AxpyFn = void (*)(double alpha, const double* x, double* y, std::size_t n);
using ScaleFn = void (*)(double* x, double alpha, std::size_t n);
using SumSqFn = double (*)(const double* x, std::size_t n);
// C(m x n) = A(m x k) * B(k x n)
using MatmulFn = void (*)(const double* a, const double* b, double* c, int m, int k, int n);

struct Ops {
  const char* name;
  DotFn dot;
  AxpyFn axpy;    // y += alpha * x
  ScaleFn scale;  // x *= alpha
  SumSqFn sum_sq;
  MatmulFn matmul_nn;  // C = A * B,   A is m x k, B is k x n
  MatmulFn matmul_nt;  // C = A * B^T, A is m x k, B is n x k
  MatmulFn matmul_tn;  // C = A^T * B, A is k x m, B is k x n
};

const Ops& scalar_ops();

// Null when the binary was built without AVX2 support.
const Ops* avx2_ops();

bool avx2_runtime_supported();

// The dispatched table. Resolved once; later calls return the same table.
const Ops& active();

// Override dispatch ("scalar" or "avx2"). Throws std::invalid_argument on an
// unknown name and std::runtime_error if the backend is unavailable here.
void force_backend(const char* name);

}  // namespace qcap::kernels
