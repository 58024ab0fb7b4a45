#include "qcap/scaling.hpp"

#include <cmath>

#include "qcap/kraus.hpp"

namespace qcap {

namespace {

// Hadamard bound: |det| <= prod of row norms. A determinant far below that
// bound marks the block as numerically singular.
void require_invertible(const Matrix& m, const char* where) {
  if (m.rows() != m.cols()) throw DimensionMismatch(std::string(where) + ": block not square");
  double hadamard = 1.0;
  for (int i = 0; i < m.rows(); ++i) {
    double row_sq = 0.0;
    for (int j = 0; j < m.cols(); ++j) row_sq += m(i, j) * m(i, j);
    hadamard *= std::sqrt(row_sq);
  }
  const SignedLogDet det = signed_log_det(m);
  if (det.sign == 0 || std::exp(det.log_abs) <= 1e-12 * hadamard)
    throw SingularBlock(std::string(where) + ": block is numerically singular");
}

void require_group_shape(const GroupElement& g, const QuiverDatum& datum) {
  if (g.gv.size() != datum.beta.beta_plus.size() || g.gw.size() != datum.beta.beta_minus.size())
    throw DimensionMismatch("group element has wrong number of blocks");
  for (std::size_t i = 0; i < g.gv.size(); ++i)
    if (g.gv[i].rows() != datum.beta.beta_plus[i] || g.gv[i].cols() != datum.beta.beta_plus[i])
      throw DimensionMismatch("group block gv[" + std::to_string(i + 1) + "] has wrong shape");
  for (std::size_t j = 0; j < g.gw.size(); ++j)
    if (g.gw[j].rows() != datum.beta.beta_minus[j] || g.gw[j].cols() != datum.beta.beta_minus[j])
      throw DimensionMismatch("group block gw[" + std::to_string(j + 1) + "] has wrong shape");
}

}  // namespace

GroupElement GroupElement::identity(const QuiverDatum& datum) {
  GroupElement g;
  for (int bp : datum.beta.beta_plus) g.gv.push_back(Matrix::identity(bp));
  for (int bm : datum.beta.beta_minus) g.gw.push_back(Matrix::identity(bm));
  return g;
}

QuiverDatum act(const GroupElement& g, const QuiverDatum& datum) {
  require_group_shape(g, datum);
  std::vector<Matrix> gv_inv;
  gv_inv.reserve(g.gv.size());
  for (const Matrix& b : g.gv) {
    require_invertible(b, "act");
    gv_inv.push_back(general_inverse(b));
  }
  for (const Matrix& b : g.gw) require_invertible(b, "act");

  QuiverDatum out = datum;
  for (std::size_t a = 0; a < datum.quiver.arrows.size(); ++a) {
    const Arrow& ar = datum.quiver.arrows[a];
    out.rep.maps[a] = g.gw[ar.sink] * datum.rep.maps[a] * gv_inv[ar.source];
  }
  return out;
}

double log_abs_character(const GroupElement& g, const Weight& sigma) {
  double acc = 0.0;
  for (std::size_t i = 0; i < g.gv.size(); ++i) {
    const SignedLogDet d = signed_log_det(g.gv[i]);
    if (d.sign == 0) throw SingularBlock("character: gv block is singular");
    acc += sigma.sigma_plus[i] * d.log_abs;
  }
  for (std::size_t j = 0; j < g.gw.size(); ++j) {
    const SignedLogDet d = signed_log_det(g.gw[j]);
    if (d.sign == 0) throw SingularBlock("character: gw block is singular");
    acc -= sigma.sigma_minus[j] * d.log_abs;
  }
  return acc;
}

double character(const GroupElement& g, const Weight& sigma) {
  int sign = 1;
  double acc = 0.0;
  for (std::size_t i = 0; i < g.gv.size(); ++i) {
    const SignedLogDet d = signed_log_det(g.gv[i]);
    if (d.sign == 0) throw SingularBlock("character: gv block is singular");
    if (d.sign < 0 && sigma.sigma_plus[i] % 2 != 0) sign = -sign;
    acc += sigma.sigma_plus[i] * d.log_abs;
  }
  for (std::size_t j = 0; j < g.gw.size(); ++j) {
    const SignedLogDet d = signed_log_det(g.gw[j]);
    if (d.sign == 0) throw SingularBlock("character: gw block is singular");
    if (d.sign < 0 && sigma.sigma_minus[j] % 2 != 0) sign = -sign;
    acc -= sigma.sigma_minus[j] * d.log_abs;
  }
  return sign * std::exp(acc);
}

GeometryCheck is_geometric(const QuiverDatum& datum, double tol) {
  GeometryCheck out;
  auto [src, snk] = ds_residual(datum);
  out.source_residuals = std::move(src);
  out.sink_residuals = std::move(snk);
  out.geometric = true;
  for (double r : out.source_residuals)
    if (r > tol) out.geometric = false;
  for (double r : out.sink_residuals)
    if (r > tol) out.geometric = false;
  return out;
}

GroupElement extremizer_to_group(const QuiverDatum& datum, const SpdTuple& sigma, double tol) {
  const double res = residual(datum, sigma);
  if (res > tol)
    throw NotExtremal("extremizer_to_group: stationarity residual " + std::to_string(res) +
                      " exceeds tolerance " + std::to_string(tol));
  GroupElement g;
  for (const SpdMatrix& s : sigma) g.gv.push_back(inv_sqrt(s).mat());
  for (Matrix& m : sink_aggregates(datum, sigma)) g.gw.push_back(inv_sqrt(SpdMatrix(m)).mat());
  return g;
}

SpdTuple gaussian_extremizers_from_group(const GroupElement& g) {
  SpdTuple out;
  for (const Matrix& b : g.gv) {
    require_invertible(b, "gaussian_extremizers_from_group");
    const Matrix inv = general_inverse(b);
    out.push_back(SpdMatrix(multiply_nt(inv, inv)));
  }
  return out;
}

CharacterFormulaReport verify_character_formula(const QuiverDatum& datum, const GroupElement& g,
                                                const SolverOptions& opts) {
  CharacterFormulaReport rep;
  rep.solve_v = solve(datum, opts);
  rep.solve_gv = solve(act(g, datum), opts);
  if (rep.solve_v.status != SolveStatus::Converged || rep.solve_gv.status != SolveStatus::Converged)
    throw Error("verify_character_formula: both solves must converge");
  rep.cap_v = rep.solve_v.cap;
  rep.cap_gv = rep.solve_gv.cap;
  rep.chi = character(g, datum.sigma);
  // Compare in log space: chi^2 cap(g.V) / cap(V) should be exactly 1.
  const double log_ratio =
      2.0 * log_abs_character(g, datum.sigma) + rep.solve_gv.log_cap - rep.solve_v.log_cap;
  rep.rel_error = std::fabs(1.0 - std::exp(log_ratio));
  return rep;
}

namespace {

// Diagonal-block sub-representation for rows [r0, r0+rows) x cols [c0, c0+cols).
Matrix corner(const Matrix& m, int r0, int rows, int c0, int cols) {
  Matrix out(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) out(i, j) = m(r0 + i, c0 + j);
  return out;
}

}  // namespace

DecompositionReport verify_decomposition(const QuiverDatum& datum, const DimensionVector& beta1,
                                         const SolverOptions& opts) {
  const std::size_t k = datum.beta.beta_plus.size();
  const std::size_t m = datum.beta.beta_minus.size();
  if (beta1.beta_plus.size() != k || beta1.beta_minus.size() != m)
    throw DimensionMismatch("verify_decomposition: split has wrong vertex counts");

  DimensionVector beta2;
  for (std::size_t i = 0; i < k; ++i) {
    if (beta1.beta_plus[i] < 0 || beta1.beta_plus[i] > datum.beta.beta_plus[i])
      throw DimensionMismatch("verify_decomposition: split exceeds beta at source " +
                              std::to_string(i + 1));
    beta2.beta_plus.push_back(datum.beta.beta_plus[i] - beta1.beta_plus[i]);
  }
  for (std::size_t j = 0; j < m; ++j) {
    if (beta1.beta_minus[j] < 0 || beta1.beta_minus[j] > datum.beta.beta_minus[j])
      throw DimensionMismatch("verify_decomposition: split exceeds beta at sink " +
                              std::to_string(j + 1));
    beta2.beta_minus.push_back(datum.beta.beta_minus[j] - beta1.beta_minus[j]);
  }

  long bal = 0;
  for (std::size_t i = 0; i < k; ++i) bal += static_cast<long>(datum.sigma.sigma_plus[i]) * beta1.beta_plus[i];
  for (std::size_t j = 0; j < m; ++j) bal -= static_cast<long>(datum.sigma.sigma_minus[j]) * beta1.beta_minus[j];
  if (bal != 0)
    throw SplitImbalance("verify_decomposition: sigma . dim(V1) = " + std::to_string(bal) +
                         ", must be 0");

  // Lower-left blocks must be exactly zero for V1 to be a subrepresentation.
  for (std::size_t a = 0; a < datum.quiver.arrows.size(); ++a) {
    const Arrow& ar = datum.quiver.arrows[a];
    const Matrix& v = datum.rep.maps[a];
    const int r1 = beta1.beta_minus[ar.sink];
    const int c1 = beta1.beta_plus[ar.source];
    for (int i = r1; i < v.rows(); ++i)
      for (int j = 0; j < c1; ++j)
        if (v(i, j) != 0.0)
          throw NotTriangular("verify_decomposition: arrow " + std::to_string(a + 1) +
                              " has a nonzero lower-left block");
  }

  QuiverDatum d1 = datum;
  QuiverDatum d2 = datum;
  d1.beta = beta1;
  d2.beta = beta2;
  for (std::size_t a = 0; a < datum.quiver.arrows.size(); ++a) {
    const Arrow& ar = datum.quiver.arrows[a];
    const Matrix& v = datum.rep.maps[a];
    const int r1 = beta1.beta_minus[ar.sink];
    const int c1 = beta1.beta_plus[ar.source];
    d1.rep.maps[a] = corner(v, 0, r1, 0, c1);
    d2.rep.maps[a] = corner(v, r1, v.rows() - r1, c1, v.cols() - c1);
  }

  DecompositionReport rep;
  rep.full = solve(datum, opts);
  rep.first = solve(d1, opts);
  rep.second = solve(d2, opts);
  if (rep.full.status != SolveStatus::Converged || rep.first.status != SolveStatus::Converged ||
      rep.second.status != SolveStatus::Converged)
    throw Error("verify_decomposition: all three solves must converge");
  rep.cap_rel_error =
      std::fabs(1.0 - std::exp(rep.first.log_cap + rep.second.log_cap - rep.full.log_cap));
  rep.constant_abs_error = std::fabs(rep.full.ajn_constant - rep.first.ajn_constant -
                                     rep.second.ajn_constant);
  return rep;
}

}  // namespace qcap
