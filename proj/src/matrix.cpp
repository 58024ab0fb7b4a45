#include "qcap/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "qcap/kernels.hpp"

namespace qcap {

namespace {
constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch(std::string(what) + ": shapes differ");
}
}  // namespace

std::size_t Matrix::checked_size(int rows, int cols) {
  if (rows < 0 || cols < 0) throw DimensionMismatch("negative matrix dimension");
  return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
}

Matrix::Matrix(int rows, int cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != checked_size(rows, cols))
    throw DimensionMismatch("entry count does not match rows*cols");
}

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

SpdMatrix::SpdMatrix(Matrix m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("SpdMatrix requires a square matrix");
  mat_ = symmetrize(m);
}

SpdMatrix SpdMatrix::identity(int n) { return SpdMatrix(Matrix::identity(n)); }

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("matmul: inner dimensions differ");
  Matrix c(a.rows(), b.cols());
  kernels::active().matmul_nn(a.data(), b.data(), c.data(), a.rows(), a.cols(), b.cols());
  return c;
}

Matrix multiply_nt(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) throw DimensionMismatch("matmul_nt: inner dimensions differ");
  Matrix c(a.rows(), b.rows());
  kernels::active().matmul_nt(a.data(), b.data(), c.data(), a.rows(), a.cols(), b.rows());
  return c;
}

Matrix multiply_tn(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw DimensionMismatch("matmul_tn: inner dimensions differ");
  Matrix c(a.cols(), b.cols());
  kernels::active().matmul_tn(a.data(), b.data(), c.data(), a.cols(), a.rows(), b.cols());
  return c;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "add");
  Matrix c = a;
  kernels::active().axpy(1.0, b.data(), c.data(), c.size());
  return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "sub");
  Matrix c = a;
  kernels::active().axpy(-1.0, b.data(), c.data(), c.size());
  return c;
}

Matrix operator*(double s, const Matrix& a) {
  Matrix c = a;
  kernels::active().scale(c.data(), s, c.size());
  return c;
}

void add_scaled(Matrix& acc, double s, const Matrix& m) {
  require_same_shape(acc, m, "add_scaled");
  kernels::active().axpy(s, m.data(), acc.data(), acc.size());
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

Matrix sandwich_nt(const Matrix& a, const Matrix& s) {
  return symmetrize(multiply_nt(a * s, a));
}

Matrix sandwich_tn(const Matrix& a, const Matrix& s) {
  return symmetrize(multiply_tn(a, s * a));
}

double frobenius_norm(const Matrix& a) {
  return std::sqrt(kernels::active().sum_sq(a.data(), a.size()));
}

double max_abs(const Matrix& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a.data()[i]));
  return m;
}

bool all_finite(const Matrix& a) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!std::isfinite(a.data()[i])) return false;
  return true;
}

Matrix symmetrize(const Matrix& a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("symmetrize: matrix not square");
  Matrix s(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) s(i, j) = 0.5 * (a(i, j) + a(j, i));
  return s;
}

// ---- Jacobi -----------------------------------------------------------------

namespace {

double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

}  // namespace

SymEig sym_eig(const Matrix& s_in) {
  Matrix a = symmetrize(s_in);
  const int n = a.rows();
  Matrix v = Matrix::identity(n);
  const double stop = 1e-13 * frobenius_norm(a);

  const int max_sweeps = 64;
  for (int sweep = 0; sweep < max_sweeps && off_diagonal_norm(a) > stop; ++sweep) {
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double app = a(p, p);
        const double aqq = a(q, q);
        // Rotation zeroing a_pq; t is the smaller-magnitude root for stability.
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (int i = 0; i < n; ++i) {
          const double aip = a(i, p);
          const double aiq = a(i, q);
          a(i, p) = c * aip - s * aiq;
          a(i, q) = s * aip + c * aiq;
        }
        for (int i = 0; i < n; ++i) {
          const double api = a(p, i);
          const double aqi = a(q, i);
          a(p, i) = c * api - s * aqi;
          a(q, i) = s * api + c * aqi;
        }
        for (int i = 0; i < n; ++i) {
          const double vip = v(i, p);
          const double viq = v(i, q);
          v(i, p) = c * vip - s * viq;
          v(i, q) = s * vip + c * viq;
        }
      }
    }
  }

  SymEig out;
  out.values.resize(n);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> diag(n);
  for (int i = 0; i < n; ++i) diag[i] = a(i, i);
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return diag[x] < diag[y]; });
  out.vectors = Matrix(n, n);
  for (int j = 0; j < n; ++j) {
    out.values[j] = diag[order[j]];
    for (int i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
  }
  return out;
}

// ---- SPD operations ---------------------------------------------------------

Matrix cholesky(const SpdMatrix& s) {
  const int n = s.dim();
  const Matrix& a = s.mat();
  double max_diag = 0.0;
  for (int i = 0; i < n; ++i) max_diag = std::max(max_diag, a(i, i));
  const double pivot_floor = n * kEps * std::max(max_diag, 0.0);

  Matrix l(n, n);
  const auto& k = kernels::active();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      // Row prefixes of L are contiguous in row-major storage.
      const double dot = k.dot(&l.data()[static_cast<std::size_t>(i) * n],
                               &l.data()[static_cast<std::size_t>(j) * n],
                               static_cast<std::size_t>(j));
      const double x = a(i, j) - dot;
      if (i == j) {
        if (x <= pivot_floor)
          throw NotPositiveDefinite("cholesky: pivot " + std::to_string(i) +
                                    " is " + std::to_string(x));
        l(i, i) = std::sqrt(x);
      } else {
        l(i, j) = x / l(j, j);
      }
    }
  }
  return l;
}

double log_det(const SpdMatrix& s) {
  const Matrix l = cholesky(s);
  double acc = 0.0;
  for (int i = 0; i < s.dim(); ++i) acc += std::log(l(i, i));
  return 2.0 * acc;
}

SpdMatrix spd_inverse(const SpdMatrix& s) {
  const int n = s.dim();
  const Matrix l = cholesky(s);
  // Invert L by forward substitution, one unit column at a time.
  Matrix linv(n, n);
  for (int col = 0; col < n; ++col) {
    for (int i = col; i < n; ++i) {
      double x = (i == col) ? 1.0 : 0.0;
      for (int j = col; j < i; ++j) x -= l(i, j) * linv(j, col);
      linv(i, col) = x / l(i, i);
    }
  }
  return SpdMatrix(multiply_tn(linv, linv));  // L^-T L^-1
}

namespace {

// Eigenvalues of an SPD candidate; rejects the matrix when the smallest
// eigenvalue falls at or below dim * eps * largest.
SymEig checked_spd_eig(const SpdMatrix& s, const char* who) {
  SymEig eig = sym_eig(s.mat());
  const double lo = eig.values.front();
  const double hi = eig.values.back();
  if (hi <= 0.0 || lo <= s.dim() * kEps * hi)
    throw NotPositiveDefinite(std::string(who) + ": eigenvalue " + std::to_string(lo) +
                              " not positive");
  return eig;
}

Matrix rebuild(const SymEig& eig, const std::vector<double>& f) {
  const int n = eig.vectors.rows();
  Matrix scaled = eig.vectors;  // columns scaled by f
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) scaled(i, j) *= f[j];
  return symmetrize(multiply_nt(scaled, eig.vectors));
}

}  // namespace

SpdMatrix inv_sqrt(const SpdMatrix& s) {
  SymEig eig = checked_spd_eig(s, "inv_sqrt");
  std::vector<double> f(eig.values.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = 1.0 / std::sqrt(eig.values[i]);
  return SpdMatrix(rebuild(eig, f));
}

Matrix spd_log(const SpdMatrix& s) {
  SymEig eig = checked_spd_eig(s, "spd_log");
  std::vector<double> f(eig.values.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::log(eig.values[i]);
  return rebuild(eig, f);
}

SpdMatrix spd_exp(const Matrix& sym) {
  SymEig eig = sym_eig(sym);
  std::vector<double> f(eig.values.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::exp(eig.values[i]);
  return SpdMatrix(rebuild(eig, f));
}

// ---- rank, LU, orthonormalization -------------------------------------------

int rank(const Matrix& m, double tol) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  const Matrix gram = (m.rows() >= m.cols()) ? multiply_tn(m, m) : multiply_nt(m, m);
  SymEig eig = sym_eig(gram);
  double sv_max = std::sqrt(std::max(eig.values.back(), 0.0));
  if (sv_max == 0.0) return 0;
  int r = 0;
  for (double lambda : eig.values)
    if (std::sqrt(std::max(lambda, 0.0)) > tol * sv_max) ++r;
  return r;
}

namespace {

struct Lu {
  Matrix lu;
  std::vector<int> piv;
  int perm_sign = 1;
  bool singular = false;
};

Lu lu_factor(Matrix a) {
  const int n = a.rows();
  Lu f;
  f.piv.resize(n);
  const double scale = max_abs(a);
  const double tiny = n * kEps * scale;
  for (int col = 0; col < n; ++col) {
    int p = col;
    for (int i = col + 1; i < n; ++i)
      if (std::fabs(a(i, col)) > std::fabs(a(p, col))) p = i;
    f.piv[col] = p;
    if (p != col) {
      for (int j = 0; j < n; ++j) std::swap(a(col, j), a(p, j));
      f.perm_sign = -f.perm_sign;
    }
    const double pivot = a(col, col);
    if (std::fabs(pivot) <= tiny) {
      f.singular = true;
      f.lu = std::move(a);
      return f;
    }
    for (int i = col + 1; i < n; ++i) {
      a(i, col) /= pivot;
      const double m = a(i, col);
      for (int j = col + 1; j < n; ++j) a(i, j) -= m * a(col, j);
    }
  }
  f.lu = std::move(a);
  return f;
}

}  // namespace

SignedLogDet signed_log_det(const Matrix& a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("signed_log_det: matrix not square");
  if (a.rows() == 0) return {1, 0.0};
  Lu f = lu_factor(a);
  if (f.singular) return {0, -std::numeric_limits<double>::infinity()};
  int sign = f.perm_sign;
  double log_abs = 0.0;
  for (int i = 0; i < a.rows(); ++i) {
    const double d = f.lu(i, i);
    if (d < 0.0) sign = -sign;
    log_abs += std::log(std::fabs(d));
  }
  return {sign, log_abs};
}

Matrix general_inverse(const Matrix& a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("general_inverse: matrix not square");
  const int n = a.rows();
  Lu f = lu_factor(a);
  if (f.singular) throw SingularBlock("general_inverse: matrix is singular");
  Matrix inv(n, n);
  std::vector<double> x(n);
  for (int col = 0; col < n; ++col) {
    std::fill(x.begin(), x.end(), 0.0);
    x[col] = 1.0;
    for (int i = 0; i < n; ++i) std::swap(x[i], x[f.piv[i]]);
    for (int i = 1; i < n; ++i)
      for (int j = 0; j < i; ++j) x[i] -= f.lu(i, j) * x[j];
    for (int i = n - 1; i >= 0; --i) {
      for (int j = i + 1; j < n; ++j) x[i] -= f.lu(i, j) * x[j];
      x[i] /= f.lu(i, i);
    }
    for (int i = 0; i < n; ++i) inv(i, col) = x[i];
  }
  return inv;
}

Matrix orthonormalize(const Matrix& m, double tol) {
  const int rows = m.rows();
  const int cols = m.cols();
  if (rows == 0 || cols == 0) return Matrix(rows, 0);

  double max_norm = 0.0;
  std::vector<std::vector<double>> kept;
  for (int j = 0; j < cols; ++j) {
    std::vector<double> v(rows);
    for (int i = 0; i < rows; ++i) v[i] = m(i, j);
    max_norm = std::max(max_norm, std::sqrt(kernels::active().sum_sq(v.data(), v.size())));
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& u : kept) {
        const double proj = kernels::active().dot(u.data(), v.data(), v.size());
        kernels::active().axpy(-proj, u.data(), v.data(), v.size());
      }
    }
    const double nrm = std::sqrt(kernels::active().sum_sq(v.data(), v.size()));
    if (nrm > tol * std::max(max_norm, 1.0)) {
      kernels::active().scale(v.data(), 1.0 / nrm, v.size());
      kept.push_back(std::move(v));
    }
  }

  Matrix q(rows, static_cast<int>(kept.size()));
  for (int j = 0; j < q.cols(); ++j)
    for (int i = 0; i < rows; ++i) q(i, j) = kept[j][i];
  return q;
}

}  // namespace qcap
