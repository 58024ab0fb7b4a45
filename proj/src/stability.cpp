#include "qcap/stability.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>

namespace qcap {

namespace {

void require_subspace_shapes(const QuiverDatum& datum, const SubspaceTuple& s) {
  if (s.bases.size() != datum.beta.beta_plus.size())
    throw DimensionMismatch("subspace tuple must have one basis per source");
  for (std::size_t i = 0; i < s.bases.size(); ++i) {
    const Matrix& b = s.bases[i];
    if (b.rows() != datum.beta.beta_plus[i] || b.cols() > b.rows())
      throw DimensionMismatch("subspace basis " + std::to_string(i + 1) + " has invalid shape");
  }
}

// Horizontal stack of V(a) * basis over all arrows into sink j.
Matrix stacked_images(const QuiverDatum& datum, const SubspaceTuple& s, int j) {
  int cols = 0;
  for (std::size_t a = 0; a < datum.quiver.arrows.size(); ++a)
    if (datum.quiver.arrows[a].sink == j) cols += s.bases[datum.quiver.arrows[a].source].cols();
  Matrix out(datum.beta.beta_minus[j], cols);
  int c0 = 0;
  for (std::size_t a = 0; a < datum.quiver.arrows.size(); ++a) {
    const Arrow& ar = datum.quiver.arrows[a];
    if (ar.sink != j) continue;
    const Matrix img = datum.rep.maps[a] * s.bases[ar.source];
    for (int r = 0; r < img.rows(); ++r)
      for (int c = 0; c < img.cols(); ++c) out(r, c0 + c) = img(r, c);
    c0 += img.cols();
  }
  return out;
}

}  // namespace

ViolationReport slack_of(const QuiverDatum& datum, const SubspaceTuple& s) {
  require_subspace_shapes(datum, s);
  ViolationReport rep;
  rep.subspaces = s;
  for (std::size_t i = 0; i < s.bases.size(); ++i)
    rep.lhs += datum.sigma.sigma_plus[i] * s.bases[i].cols();
  for (int j = 0; j < datum.quiver.m; ++j)
    rep.rhs += datum.sigma.sigma_minus[j] * rank(stacked_images(datum, s, j));
  rep.slack = rep.lhs - rep.rhs;
  return rep;
}

// ---- violator search --------------------------------------------------------

namespace {

Matrix coordinate_basis(int dim, unsigned mask) {
  int cols = 0;
  for (int b = 0; b < dim; ++b)
    if (mask & (1u << b)) ++cols;
  Matrix m(dim, cols);
  int c = 0;
  for (int b = 0; b < dim; ++b)
    if (mask & (1u << b)) m(b, c++) = 1.0;
  return m;
}

// Vertical stack of all maps leaving source i.
Matrix vertex_stack(const QuiverDatum& datum, int i) {
  int rows = 0;
  for (std::size_t a = 0; a < datum.quiver.arrows.size(); ++a)
    if (datum.quiver.arrows[a].source == i) rows += datum.rep.maps[a].rows();
  Matrix out(rows, datum.beta.beta_plus[i]);
  int r0 = 0;
  for (std::size_t a = 0; a < datum.quiver.arrows.size(); ++a) {
    if (datum.quiver.arrows[a].source != i) continue;
    const Matrix& v = datum.rep.maps[a];
    for (int r = 0; r < v.rows(); ++r)
      for (int c = 0; c < v.cols(); ++c) out(r0 + r, c) = v(r, c);
    r0 += v.rows();
  }
  return out;
}

// Columns = eigenvectors of the `count` smallest eigenvalues of gram.
Matrix smallest_eigenvector_span(const SymEig& eig, int count) {
  const int dim = eig.vectors.rows();
  Matrix m(dim, count);
  for (int c = 0; c < count; ++c)
    for (int r = 0; r < dim; ++r) m(r, c) = eig.vectors(r, c);
  return m;
}

struct Search {
  const QuiverDatum& datum;
  int budget;
  std::optional<ViolationReport> hit;

  bool evaluate(const SubspaceTuple& s) {
    if (budget <= 0) return true;  // exhausted
    --budget;
    ViolationReport rep = slack_of(datum, s);
    if (rep.slack > 0) {
      hit = std::move(rep);
      return true;
    }
    return false;
  }
};

SubspaceTuple zero_tuple(const QuiverDatum& datum) {
  SubspaceTuple s;
  for (int bp : datum.beta.beta_plus) s.bases.push_back(Matrix(bp, 0));
  return s;
}

void coordinate_search(Search& ctx) {
  const auto& beta = ctx.datum.beta.beta_plus;
  long total = 1;
  for (int bp : beta) {
    if (bp >= 12) return;  // 2^12 alone would blow the gate below
    total *= (1L << bp);
    if (total > 4096) return;
  }
  const int k = static_cast<int>(beta.size());
  std::vector<unsigned> masks(k, 0);
  for (long idx = 1; idx < total; ++idx) {  // skip the all-zero tuple
    long rem = idx;
    SubspaceTuple s;
    for (int i = 0; i < k; ++i) {
      const long width = 1L << beta[i];
      masks[i] = static_cast<unsigned>(rem % width);
      rem /= width;
      s.bases.push_back(coordinate_basis(beta[i], masks[i]));
    }
    if (ctx.evaluate(s)) return;
  }
}

void kernel_search(Search& ctx) {
  const QuiverDatum& d = ctx.datum;
  const int k = d.quiver.k;
  std::vector<Matrix> kernels(k);
  for (int i = 0; i < k; ++i) {
    const Matrix stack = vertex_stack(d, i);
    const int dim = d.beta.beta_plus[i];
    if (stack.rows() == 0) {
      kernels[i] = Matrix::identity(dim);  // no arrows: everything is killed
      continue;
    }
    const SymEig eig = sym_eig(multiply_tn(stack, stack));
    const double lambda_max = std::max(eig.values.back(), 0.0);
    int null_dim = 0;
    while (null_dim < dim && eig.values[null_dim] <= 1e-20 + 1e-14 * lambda_max) ++null_dim;
    kernels[i] = smallest_eigenvector_span(eig, null_dim);

    // Single-source candidates: kernel and each small-singular span.
    for (int count = std::max(null_dim, 1); count < dim; ++count) {
      SubspaceTuple s = zero_tuple(d);
      s.bases[i] = smallest_eigenvector_span(eig, count);
      if (ctx.evaluate(s)) return;
    }
    if (null_dim > 0) {
      SubspaceTuple s = zero_tuple(d);
      s.bases[i] = kernels[i];
      if (ctx.evaluate(s)) return;
    }
  }
  // All kernels together.
  bool any = false;
  for (const Matrix& m : kernels) any = any || m.cols() > 0;
  if (any) {
    SubspaceTuple s;
    s.bases = kernels;
    if (ctx.evaluate(s)) return;
  }
}

// For fixed dimensions, replace each source's subspace by the span least
// visible at the sinks given the other sources' current images, then
// re-evaluate. Projectors are refreshed once per sweep.
void descent_search(Search& ctx, std::mt19937_64& rng) {
  const QuiverDatum& d = ctx.datum;
  const int k = d.quiver.k;
  std::normal_distribution<double> gauss(0.0, 1.0);

  while (ctx.budget > 0) {
    SubspaceTuple s;
    bool proper = false;
    for (int i = 0; i < k; ++i) {
      const int dim = d.beta.beta_plus[i];
      std::uniform_int_distribution<int> pick(0, dim);
      const int cols = pick(rng);
      if (cols != dim) proper = true;
      Matrix raw(dim, cols);
      for (int r = 0; r < dim; ++r)
        for (int c = 0; c < cols; ++c) raw(r, c) = gauss(rng);
      s.bases.push_back(orthonormalize(raw));
    }
    if (!proper) continue;  // full tuple reduces to the balance identity
    if (ctx.evaluate(s)) return;

    for (int sweep = 0; sweep < 4 && ctx.budget > 0; ++sweep) {
      for (int i = 0; i < k; ++i) {
        const int dim = s.bases[i].cols();
        if (dim == 0 || dim == d.beta.beta_plus[i]) continue;
        // Complement projectors of the spans contributed by other sources.
        std::vector<Matrix> proj(d.quiver.m);
        for (int j = 0; j < d.quiver.m; ++j) {
          SubspaceTuple others = s;
          others.bases[i] = Matrix(d.beta.beta_plus[i], 0);
          const Matrix span = orthonormalize(stacked_images(d, others, j), 1e-10);
          proj[j] = Matrix::identity(d.beta.beta_minus[j]) - multiply_nt(span, span);
        }
        Matrix cost(d.beta.beta_plus[i], d.beta.beta_plus[i]);
        for (std::size_t a = 0; a < d.quiver.arrows.size(); ++a) {
          const Arrow& ar = d.quiver.arrows[a];
          if (ar.source != i) continue;
          add_scaled(cost, static_cast<double>(d.sigma.sigma_minus[ar.sink]),
                     sandwich_tn(d.rep.maps[a], proj[ar.sink]));
        }
        s.bases[i] = smallest_eigenvector_span(sym_eig(cost), dim);
      }
      if (ctx.evaluate(s)) return;
    }
  }
}

}  // namespace

std::optional<ViolationReport> find_violator(const QuiverDatum& datum, int budget,
                                             std::uint64_t seed) {
  Search ctx{datum, budget, std::nullopt};
  coordinate_search(ctx);
  if (ctx.hit) return ctx.hit;
  kernel_search(ctx);
  if (ctx.hit) return ctx.hit;
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  descent_search(ctx, rng);
  return ctx.hit;
}

// ---- endomorphism dimension ------------------------------------------------

int endomorphism_dimension(const QuiverDatum& datum) {
  const int k = datum.quiver.k;
  const int m = datum.quiver.m;
  // Unknown layout: phi(v_i) blocks first, then phi(w_j) blocks, row-major.
  std::vector<int> offset_v(k), offset_w(m);
  int unknowns = 0;
  for (int i = 0; i < k; ++i) {
    offset_v[i] = unknowns;
    unknowns += datum.beta.beta_plus[i] * datum.beta.beta_plus[i];
  }
  for (int j = 0; j < m; ++j) {
    offset_w[j] = unknowns;
    unknowns += datum.beta.beta_minus[j] * datum.beta.beta_minus[j];
  }

  int equations = 0;
  for (std::size_t a = 0; a < datum.quiver.arrows.size(); ++a)
    equations += datum.rep.maps[a].size();

  Matrix sys(equations, unknowns);
  int row = 0;
  for (std::size_t a = 0; a < datum.quiver.arrows.size(); ++a) {
    const Arrow& ar = datum.quiver.arrows[a];
    const Matrix& v = datum.rep.maps[a];
    const int rows_w = v.rows();
    const int cols_v = v.cols();
    // Entry (s, t) of phi(w) V(a) - V(a) phi(v) = 0.
    for (int s = 0; s < rows_w; ++s)
      for (int t = 0; t < cols_v; ++t) {
        for (int u = 0; u < rows_w; ++u)
          sys(row, offset_w[ar.sink] + s * rows_w + u) += v(u, t);
        for (int u = 0; u < cols_v; ++u)
          sys(row, offset_v[ar.source] + u * cols_v + t) -= v(s, u);
        ++row;
      }
  }
  return unknowns - rank(sys);
}

// ---- uniqueness probe -------------------------------------------------------

double tuple_deviation(const SpdTuple& a, const SpdTuple& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double scale = std::max({max_abs(a[i].mat()), max_abs(b[i].mat()), 1e-300});
    worst = std::max(worst, max_abs(a[i].mat() - b[i].mat()) / scale);
  }
  return worst;
}

namespace {

SpdTuple random_spd_start(const QuiverDatum& datum, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  SpdTuple sigma;
  for (int bp : datum.beta.beta_plus) {
    Matrix w(bp, bp);
    for (int r = 0; r < bp; ++r)
      for (int c = 0; c < bp; ++c) w(r, c) = gauss(rng);
    Matrix s = multiply_nt(w, w);
    for (int r = 0; r < bp; ++r) s(r, r) += 0.1;
    sigma.push_back(SpdMatrix(s));
  }
  return sigma;
}

}  // namespace

UniquenessReport uniqueness_probe(const QuiverDatum& datum, int restarts,
                                  const SolverOptions& opts, int threads) {
  UniquenessReport rep;
  rep.restarts = restarts;

  std::vector<std::optional<SpdTuple>> limits(restarts);
  auto run = [&](int r) {
    const CapacityReport cr = solve_from(datum, random_spd_start(datum, opts.seed + r), opts);
    if (cr.status == SolveStatus::Converged) limits[r] = cr.extremizer;
  };

  if (threads <= 1) {
    for (int r = 0; r < restarts; ++r) run(r);
  } else {
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (int r = next.fetch_add(1); r < restarts; r = next.fetch_add(1)) run(r);
      });
    for (std::thread& t : pool) t.join();
  }

  std::vector<const SpdTuple*> got;
  for (const auto& l : limits)
    if (l) got.push_back(&*l);
  rep.converged = static_cast<int>(got.size());
  if (got.size() < 2) return rep;  // Inconclusive

  for (std::size_t x = 0; x < got.size(); ++x)
    for (std::size_t y = x + 1; y < got.size(); ++y) {
      const double dev = tuple_deviation(*got[x], *got[y]);
      rep.max_pair_deviation = std::max(rep.max_pair_deviation, dev);
      if (dev > 1e-3 && !rep.witness) rep.witness = std::make_pair(*got[x], *got[y]);
    }

  if (rep.witness)
    rep.verdict = UniquenessVerdict::NonUnique;
  else if (rep.max_pair_deviation <= 1e-5 && rep.converged == restarts)
    rep.verdict = UniquenessVerdict::Unique;
  else
    rep.verdict = UniquenessVerdict::Inconclusive;
  return rep;
}

}  // namespace qcap
