#pragma once

// Dense matrix types and the factorizations the capacity machinery needs.
// Everything here targets desk-scale problems (dims well under ~64): cyclic
// Jacobi for symmetric eigenproblems, unblocked Cholesky, LU with partial
// pivoting for general determinants and inverses.

#include <cstddef>
#include <vector>

#include "qcap/errors.hpp"

namespace qcap {

class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(checked_size(rows, cols), 0.0) {}
  Matrix(int rows, int cols, std::vector<double> entries);

  static Matrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  double operator()(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::size_t size() const { return data_.size(); }

  bool empty() const { return data_.empty(); }

 private:
  static std::size_t checked_size(int rows, int cols);

  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

// Symmetric positive definite candidate. Construction squares the shape and
// symmetrizes (S + S^T)/2; positive definiteness itself is certified lazily,
// by whichever factorization touches the matrix first.
class SpdMatrix {
 public:
  SpdMatrix() = default;
  explicit SpdMatrix(Matrix m);

  static SpdMatrix identity(int n);

  int dim() const { return mat_.rows(); }
  const Matrix& mat() const { return mat_; }
  double operator()(int r, int c) const { return mat_(r, c); }

 private:
  Matrix mat_;
};

// ---- elementwise and product helpers ---------------------------------------

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& a);

Matrix multiply_nt(const Matrix& a, const Matrix& b);  // A * B^T
Matrix multiply_tn(const Matrix& a, const Matrix& b);  // A^T * B
Matrix transpose(const Matrix& a);
void add_scaled(Matrix& acc, double s, const Matrix& m);  // acc += s * m

// A * S * A^T and A^T * S * A with S symmetric; results symmetrized.
Matrix sandwich_nt(const Matrix& a, const Matrix& s);
Matrix sandwich_tn(const Matrix& a, const Matrix& s);

double frobenius_norm(const Matrix& a);
double max_abs(const Matrix& a);
bool all_finite(const Matrix& a);
Matrix symmetrize(const Matrix& a);

// ---- symmetric eigendecomposition (cyclic Jacobi) ---------------------------

struct SymEig {
  std::vector<double> values;  // ascending
  Matrix vectors;              // columns; A = V diag(values) V^T
};

// Input is symmetrized first. Sweeps until the off-diagonal Frobenius norm
// drops below 1e-13 * ||S||_F.
SymEig sym_eig(const Matrix& s);

// ---- SPD operations ---------------------------------------------------------

// Lower-triangular L with L L^T = S. Throws NotPositiveDefinite when a pivot
// falls at or below dim * eps * max(diag).
Matrix cholesky(const SpdMatrix& s);

double log_det(const SpdMatrix& s);
SpdMatrix spd_inverse(const SpdMatrix& s);

// Symmetric R with R S R = I, via Jacobi eigendecomposition.
SpdMatrix inv_sqrt(const SpdMatrix& s);

Matrix spd_log(const SpdMatrix& s);
SpdMatrix spd_exp(const Matrix& sym);

// ---- rank and general (non-symmetric) kernels -------------------------------

// Number of singular values above tol * (largest singular value); singular
// values via Jacobi on the smaller Gram matrix.
int rank(const Matrix& m, double tol = 1e-10);

struct SignedLogDet {
  int sign;        // -1, 0, +1
  double log_abs;  // -inf when sign == 0
};

// Via LU with partial pivoting.
SignedLogDet signed_log_det(const Matrix& a);

// Throws SingularBlock.
Matrix general_inverse(const Matrix& a);

// Modified Gram-Schmidt with a second pass; columns whose residual falls
// below tol * max column norm are dropped. Returns orthonormal columns
// spanning the column space.
Matrix orthonormalize(const Matrix& m, double tol = 1e-12);

}  // namespace qcap
