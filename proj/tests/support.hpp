#pragma once

// Shared fixtures for the test suites: reference data from the worked
// examples, random generators, and the independent oracles (brute-force
// determinants, dense Kraus application, log-space grid search for all-scalar
// capacity problems).

#include <cmath>
#include <random>
#include <vector>

#include "qcap/capacity.hpp"
#include "qcap/kraus.hpp"
#include "qcap/quiver.hpp"

namespace testsupport {

using qcap::AjnDatum;
using qcap::Matrix;
using qcap::QuiverDatum;
using qcap::SpdMatrix;
using qcap::SpdTuple;

inline Matrix mat(int rows, int cols, std::initializer_list<double> entries) {
  return Matrix(rows, cols, std::vector<double>(entries));
}

inline Matrix scalar_mat(double x) { return mat(1, 1, {x}); }

// ---- reference data ----------------------------------------------------------

// Entropy-power instance: k=2, m=1, d=(1,1), n=(1), c=(1,1), p=(2), maps [1],[1].
// cap = 4, M = -log 2, extremizer proportional to (1,1).
inline AjnDatum epi_ajn() {
  AjnDatum a;
  a.d = {1, 1};
  a.n = {1};
  a.c = {1, 1};
  a.p = {2};
  a.A = {{scalar_mat(1.0)}, {scalar_mat(1.0)}};
  return a;
}

// Orthogonal-columns instance: k=2, m=1, d=(1,1), n=(2), c=(1,1), p=(1),
// maps e_1 and e_2. Geometric; cap = 1.
inline AjnDatum orthogonal_ajn() {
  AjnDatum a;
  a.d = {1, 1};
  a.n = {2};
  a.c = {1, 1};
  a.p = {1};
  a.A = {{mat(2, 1, {1.0, 0.0})}, {mat(2, 1, {0.0, 1.0})}};
  return a;
}

// Infeasible instance: k=m=1, d=(2), n=(1), c=(1), p=(2), A=[1 0].
// Violating subspace span(e_2); capacity 0.
inline AjnDatum infeasible_ajn() {
  AjnDatum a;
  a.d = {2};
  a.n = {1};
  a.c = {1};
  a.p = {2};
  a.A = {{mat(1, 2, {1.0, 0.0})}};
  return a;
}

// k=m=1, d=n=(2), c=p=(1), A=I. Geometric, End dimension 4.
inline AjnDatum identity2_ajn() {
  AjnDatum a;
  a.d = {2};
  a.n = {2};
  a.c = {1};
  a.p = {1};
  a.A = {{Matrix::identity(2)}};
  return a;
}

// Upper-triangular instance over the EPI pair: k=2, m=1, d=(2,2), n=(2),
// c=(1,1), p=(2), A_i = [[1, x_i], [0, 1]]. Both diagonal subproblems are
// the EPI instance, so cap = 16, M = -2 log 2 for every x.
inline AjnDatum triangular_ajn(double x1, double x2) {
  AjnDatum a;
  a.d = {2, 2};
  a.n = {2};
  a.c = {1, 1};
  a.p = {2};
  a.A = {{mat(2, 2, {1.0, x1, 0.0, 1.0})}, {mat(2, 2, {1.0, x2, 0.0, 1.0})}};
  return a;
}

// Direct sum of two copies of the EPI representation (triangular with x = 0).
// Extremizers are all pairs (S, S); decidedly non-unique.
inline AjnDatum direct_sum_ajn() { return triangular_ajn(0.0, 0.0); }

// A multi-arrow quiver datum no AJN datum produces: one source, one sink,
// beta = (1),(1), sigma = (2),(2), two parallel arrows [a] and [b].
inline QuiverDatum two_arrow_datum(double a, double b) {
  QuiverDatum d;
  d.quiver.k = 1;
  d.quiver.m = 1;
  d.quiver.arrows = {{0, 0}, {0, 0}};
  d.beta.beta_plus = {1};
  d.beta.beta_minus = {1};
  d.sigma.sigma_plus = {2};
  d.sigma.sigma_minus = {2};
  d.rep.maps = {scalar_mat(a), scalar_mat(b)};
  return d;
}

// ---- random generators ---------------------------------------------------------

inline Matrix random_matrix(int rows, int cols, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> gauss(0.0, scale);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = gauss(rng);
  return m;
}

inline SpdMatrix random_spd(int dim, std::mt19937_64& rng, double ridge = 0.1) {
  const Matrix w = random_matrix(dim, dim, rng);
  Matrix s = qcap::multiply_nt(w, w);
  for (int i = 0; i < dim; ++i) s(i, i) += ridge;
  return SpdMatrix(s);
}

inline Matrix random_orthogonal(int n, std::mt19937_64& rng) {
  return qcap::orthonormalize(random_matrix(n, n, rng));
}

// Random invertible block with a determinant bounded away from zero.
inline Matrix random_invertible(int n, std::mt19937_64& rng) {
  for (;;) {
    Matrix m = random_matrix(n, n, rng);
    const qcap::SignedLogDet d = qcap::signed_log_det(m);
    if (d.sign != 0 && d.log_abs > std::log(0.1)) return m;
  }
}

// Geometric AJN datum from an orthogonal column partition: c_i = 1, p = (1),
// n = sum d_i, A_i = column block i of a random orthogonal matrix.
inline AjnDatum random_geometric_ajn(const std::vector<int>& dims, std::mt19937_64& rng) {
  int n = 0;
  for (int d : dims) n += d;
  const Matrix q = random_orthogonal(n, rng);
  AjnDatum a;
  a.d = dims;
  a.n = {n};
  a.c = std::vector<int>(dims.size(), 1);
  a.p = {1};
  int col0 = 0;
  for (int d : dims) {
    Matrix block(n, d);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < d; ++c) block(r, c) = q(r, col0 + c);
    a.A.push_back({block});
    col0 += d;
  }
  return a;
}

// Two-sink geometric variant: c_i = 2, p = (1,1), n_1 = n_2 = sum d_i, and an
// independent orthogonal partition per sink.
inline AjnDatum random_geometric_two_sink_ajn(const std::vector<int>& dims, std::mt19937_64& rng) {
  int n = 0;
  for (int d : dims) n += d;
  AjnDatum a;
  a.d = dims;
  a.n = {n, n};
  a.c = std::vector<int>(dims.size(), 2);
  a.p = {1, 1};
  const Matrix q1 = random_orthogonal(n, rng);
  const Matrix q2 = random_orthogonal(n, rng);
  int col0 = 0;
  for (int d : dims) {
    Matrix b1(n, d), b2(n, d);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < d; ++c) {
        b1(r, c) = q1(r, col0 + c);
        b2(r, c) = q2(r, col0 + c);
      }
    a.A.push_back({b1, b2});
    col0 += d;
  }
  return a;
}

// All-scalar feasible AJN datum with balanced exponents <= 3 and positive maps.
inline AjnDatum random_scalar_ajn(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick_km(1, 3);
  std::uniform_int_distribution<int> pick_exp(1, 3);
  std::uniform_real_distribution<double> pick_map(0.3, 2.0);
  for (;;) {
    const int k = pick_km(rng);
    const int m = pick_km(rng);
    std::vector<int> c(k), p(m);
    int sum_c = 0;
    for (int& x : c) sum_c += (x = pick_exp(rng));
    if (sum_c < m || sum_c > 3 * m) continue;  // no balanced p exists
    int remaining = sum_c;
    bool ok = true;
    for (int j = 0; j < m; ++j) {
      const int slots_left = m - j - 1;
      const int lo = std::max(1, remaining - 3 * slots_left);
      const int hi = std::min(3, remaining - slots_left);
      if (lo > hi) {
        ok = false;
        break;
      }
      std::uniform_int_distribution<int> pick(lo, hi);
      p[j] = pick(rng);
      remaining -= p[j];
    }
    if (!ok || remaining != 0) continue;
    AjnDatum a;
    a.d = std::vector<int>(k, 1);
    a.n = std::vector<int>(m, 1);
    a.c = c;
    a.p = p;
    for (int i = 0; i < k; ++i) {
      std::vector<Matrix> row;
      for (int j = 0; j < m; ++j) row.push_back(scalar_mat(pick_map(rng)));
      a.A.push_back(std::move(row));
    }
    return a;
  }
}

// ---- oracles ---------------------------------------------------------------

// Cofactor expansion, dimensions <= 8 or so.
inline double brute_force_det(const Matrix& m) {
  const int n = m.rows();
  if (n == 0) return 1.0;
  if (n == 1) return m(0, 0);
  double acc = 0.0;
  double sign = 1.0;
  for (int c = 0; c < n; ++c) {
    Matrix minor(n - 1, n - 1);
    for (int i = 1; i < n; ++i) {
      int cc = 0;
      for (int j = 0; j < n; ++j) {
        if (j == c) continue;
        minor(i - 1, cc++) = m(i, j);
      }
    }
    acc += sign * m(0, c) * brute_force_det(minor);
    sign = -sign;
  }
  return acc;
}

inline double brute_force_min_symmetric_eigenvalue(const Matrix& s) {
  // Characteristic sign scan: smallest eigenvalue via bisection on
  // det(S - t I), using the brute-force determinant. Good enough for the
  // crafted matrices in the tests (dim <= 4).
  const int n = s.rows();
  double lo = -1.0, hi = 1.0;
  const double bound = 1.0 + qcap::max_abs(s) * n;
  lo = -bound;
  hi = bound;
  auto count_below = [&](double t) {
    // Sylvester inertia by brute determinant signs of leading minors of S - tI.
    Matrix shifted = s;
    for (int i = 0; i < n; ++i) shifted(i, i) -= t;
    int negatives = 0;
    double prev = 1.0;
    for (int d = 1; d <= n; ++d) {
      Matrix lead(d, d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) lead(i, j) = shifted(i, j);
      const double det = brute_force_det(lead);
      if ((det < 0) != (prev < 0)) ++negatives;
      prev = det;
    }
    return negatives;
  };
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (count_below(mid) >= 1)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

// Dense N x N Kraus matrices, built explicitly from the layout.
inline std::vector<Matrix> dense_kraus_matrices(const qcap::KrausSystem& ks) {
  const qcap::IndexLayout& lay = ks.layout;
  std::vector<Matrix> out;
  for (const qcap::KrausDescriptor& op : ks.ops) {
    Matrix k(lay.N, lay.N);
    const int r0 = lay.qblock_offset[op.q];
    const int c0 = lay.rblock_offset[op.r];
    for (int i = 0; i < op.block.rows(); ++i)
      for (int j = 0; j < op.block.cols(); ++j) k(r0 + i, c0 + j) = op.block(i, j);
    out.push_back(std::move(k));
  }
  return out;
}

inline Matrix dense_apply_T(const qcap::KrausSystem& ks, const Matrix& x) {
  Matrix acc(ks.layout.N, ks.layout.N);
  for (const Matrix& k : dense_kraus_matrices(ks))
    acc = acc + qcap::multiply_tn(k, x * k);
  return acc;
}

inline Matrix dense_apply_T_star(const qcap::KrausSystem& ks, const Matrix& x) {
  Matrix acc(ks.layout.N, ks.layout.N);
  for (const Matrix& k : dense_kraus_matrices(ks))
    acc = acc + qcap::multiply_nt(k * x, k);
  return acc;
}

// log cap for an all-scalar datum at positive sigma (natural logs).
inline double scalar_log_cap(const QuiverDatum& d, const std::vector<double>& log_sigma) {
  const int m = d.quiver.m;
  std::vector<double> agg(m, 0.0);
  for (std::size_t a = 0; a < d.quiver.arrows.size(); ++a) {
    const qcap::Arrow& ar = d.quiver.arrows[a];
    const double v = d.rep.maps[a](0, 0);
    agg[ar.sink] += d.sigma.sigma_plus[ar.source] * v * v * std::exp(log_sigma[ar.source]);
  }
  double lc = 0.0;
  for (int j = 0; j < m; ++j) lc += d.sigma.sigma_minus[j] * std::log(agg[j]);
  for (int i = 0; i < d.quiver.k; ++i) lc -= d.sigma.sigma_plus[i] * log_sigma[i];
  return lc;
}

// Independent minimizer for all-scalar data: coarse log-space grid over
// [1e-3, 1e3]^k followed by per-coordinate golden-section refinement. The
// objective is convex in log sigma, so this pins the infimum tightly.
inline double scalar_grid_search_log_cap(const QuiverDatum& d) {
  const int k = d.quiver.k;
  const double lo = std::log(1e-3);
  const double hi = std::log(1e3);
  const int steps = 13;

  std::vector<double> best(k, 0.0);
  double best_val = scalar_log_cap(d, best);
  std::vector<int> idx(k, 0);
  for (;;) {
    std::vector<double> pt(k);
    for (int i = 0; i < k; ++i) pt[i] = lo + (hi - lo) * idx[i] / (steps - 1);
    const double val = scalar_log_cap(d, pt);
    if (val < best_val) {
      best_val = val;
      best = pt;
    }
    int carry = 0;
    while (carry < k && ++idx[carry] == steps) idx[carry++] = 0;
    if (carry == k) break;
  }

  // Coordinate golden-section sweeps.
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int sweep = 0; sweep < 60; ++sweep) {
    double moved = 0.0;
    for (int i = 0; i < k; ++i) {
      double a = best[i] - 2.0, b = best[i] + 2.0;
      auto eval = [&](double t) {
        std::vector<double> pt = best;
        pt[i] = t;
        return scalar_log_cap(d, pt);
      };
      double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
      double f1 = eval(x1), f2 = eval(x2);
      while (b - a > 1e-12) {
        if (f1 < f2) {
          b = x2;
          x2 = x1;
          f2 = f1;
          x1 = b - phi * (b - a);
          f1 = eval(x1);
        } else {
          a = x1;
          x1 = x2;
          f1 = f2;
          x2 = a + phi * (b - a);
          f2 = eval(x2);
        }
      }
      const double t = 0.5 * (a + b);
      moved = std::max(moved, std::fabs(t - best[i]));
      best[i] = t;
    }
    best_val = scalar_log_cap(d, best);
    if (moved < 1e-13) break;
  }
  return best_val;
}

}  // namespace testsupport
