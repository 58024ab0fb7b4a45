#include "qcap/capacity.hpp"

#include <cmath>
#include <stdexcept>

namespace qcap {

namespace {

void require_solvable(const QuiverDatum& datum) {
  const std::vector<Finding> findings = validate(datum);
  for (const Finding& f : findings)
    if (f.severity == Finding::Severity::Error)
      throw std::invalid_argument("solve: invalid datum: " + describe(findings));
  if (datum.is_zero_representation())
    throw ZeroRepresentation("solve: representation is identically zero");
}

void require_tuple_shape(const QuiverDatum& datum, const SpdTuple& sigma) {
  if (sigma.size() != datum.beta.beta_plus.size())
    throw DimensionMismatch("SPD tuple must have one matrix per source vertex");
  for (std::size_t i = 0; i < sigma.size(); ++i)
    if (sigma[i].dim() != datum.beta.beta_plus[i])
      throw DimensionMismatch("SPD tuple entry " + std::to_string(i + 1) + " has dimension " +
                              std::to_string(sigma[i].dim()) + ", expected " +
                              std::to_string(datum.beta.beta_plus[i]));
}

// Aggregates certified positive definite, or SingularAggregate.
std::vector<SpdMatrix> certified_aggregates(const QuiverDatum& datum, const SpdTuple& sigma) {
  std::vector<Matrix> aggs = sink_aggregates(datum, sigma);
  std::vector<SpdMatrix> out;
  out.reserve(aggs.size());
  for (std::size_t j = 0; j < aggs.size(); ++j) {
    SpdMatrix m(aggs[j]);
    try {
      cholesky(m);
    } catch (const NotPositiveDefinite&) {
      throw SingularAggregate("sink aggregate M_" + std::to_string(j + 1) +
                              " is not positive definite");
    }
    out.push_back(std::move(m));
  }
  return out;
}

// B_i = sum_j sigma_-(w_j) sum_a V(a)^T M_j^{-1} V(a)
std::vector<Matrix> stationarity_sums(const QuiverDatum& datum,
                                      const std::vector<SpdMatrix>& agg_inv) {
  std::vector<Matrix> b;
  b.reserve(datum.beta.beta_plus.size());
  for (int bp : datum.beta.beta_plus) b.emplace_back(bp, bp);
  for (std::size_t a = 0; a < datum.quiver.arrows.size(); ++a) {
    const Arrow& ar = datum.quiver.arrows[a];
    const Matrix& v = datum.rep.maps[a];
    add_scaled(b[ar.source], static_cast<double>(datum.sigma.sigma_minus[ar.sink]),
               sandwich_tn(v, agg_inv[ar.sink].mat()));
  }
  return b;
}

double log_cap_from(const QuiverDatum& datum, const SpdTuple& sigma,
                    const std::vector<SpdMatrix>& aggs) {
  double lc = 0.0;
  for (std::size_t j = 0; j < aggs.size(); ++j)
    lc += datum.sigma.sigma_minus[j] * log_det(aggs[j]);
  for (std::size_t i = 0; i < sigma.size(); ++i)
    lc -= datum.sigma.sigma_plus[i] * log_det(sigma[i]);
  return lc;
}

double residual_from(const SpdTuple& sigma, const std::vector<Matrix>& brackets) {
  double worst = 0.0;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    const Matrix inv = spd_inverse(sigma[i]).mat();
    worst = std::max(worst, frobenius_norm(brackets[i] - inv) / frobenius_norm(inv));
  }
  return worst;
}

SpdTuple step_from(const QuiverDatum& datum, const SpdTuple& sigma,
                   const std::vector<Matrix>& brackets, double damping) {
  SpdTuple next;
  next.reserve(sigma.size());
  for (std::size_t i = 0; i < brackets.size(); ++i) {
    SpdMatrix b(brackets[i]);
    try {
      next.push_back(spd_inverse(b));
    } catch (const NotPositiveDefinite&) {
      throw SingularUpdate("stationarity sum for source " + std::to_string(i + 1) +
                           " has a kernel direction");
    }
  }
  if (damping > 0.0) {
    for (std::size_t i = 0; i < next.size(); ++i) {
      Matrix blended = (1.0 - damping) * spd_log(next[i]);
      add_scaled(blended, damping, spd_log(sigma[i]));
      next[i] = spd_exp(blended);
    }
  }
  return det_normalize(datum, std::move(next));
}

CapacityReport infeasible_report(int iterations, double last_residual,
                                 std::vector<double> trace) {
  CapacityReport r;
  r.status = SolveStatus::Infeasible;
  r.cap = 0.0;
  r.log_cap = -std::numeric_limits<double>::infinity();
  r.ajn_constant = std::numeric_limits<double>::infinity();
  r.iterations = iterations;
  r.final_residual = last_residual;
  r.cap_trace = std::move(trace);
  return r;
}

}  // namespace

std::vector<Matrix> sink_aggregates(const QuiverDatum& datum, const SpdTuple& sigma) {
  require_tuple_shape(datum, sigma);
  std::vector<Matrix> aggs;
  aggs.reserve(datum.beta.beta_minus.size());
  for (int bm : datum.beta.beta_minus) aggs.emplace_back(bm, bm);
  for (std::size_t a = 0; a < datum.quiver.arrows.size(); ++a) {
    const Arrow& ar = datum.quiver.arrows[a];
    const Matrix& v = datum.rep.maps[a];
    add_scaled(aggs[ar.sink], static_cast<double>(datum.sigma.sigma_plus[ar.source]),
               sandwich_nt(v, sigma[ar.source].mat()));
  }
  for (Matrix& m : aggs) m = symmetrize(m);
  return aggs;
}

double log_cap_at(const QuiverDatum& datum, const SpdTuple& sigma) {
  return log_cap_from(datum, sigma, certified_aggregates(datum, sigma));
}

double cap_at(const QuiverDatum& datum, const SpdTuple& sigma) {
  return std::exp(log_cap_at(datum, sigma));
}

double residual(const QuiverDatum& datum, const SpdTuple& sigma) {
  const std::vector<SpdMatrix> aggs = certified_aggregates(datum, sigma);
  std::vector<SpdMatrix> agg_inv;
  agg_inv.reserve(aggs.size());
  for (const SpdMatrix& m : aggs) agg_inv.push_back(spd_inverse(m));
  return residual_from(sigma, stationarity_sums(datum, agg_inv));
}

SpdTuple fixed_point_step(const QuiverDatum& datum, const SpdTuple& sigma, double damping) {
  const std::vector<SpdMatrix> aggs = certified_aggregates(datum, sigma);
  std::vector<SpdMatrix> agg_inv;
  agg_inv.reserve(aggs.size());
  for (const SpdMatrix& m : aggs) agg_inv.push_back(spd_inverse(m));
  return step_from(datum, sigma, stationarity_sums(datum, agg_inv), damping);
}

SpdTuple det_normalize(const QuiverDatum& datum, SpdTuple sigma) {
  require_tuple_shape(datum, sigma);
  const int n = datum.total_dim_plus();
  double s = 0.0;
  for (std::size_t i = 0; i < sigma.size(); ++i)
    s += datum.sigma.sigma_plus[i] * log_det(sigma[i]);
  const double t = std::exp(-s / n);
  for (SpdMatrix& m : sigma) m = SpdMatrix(t * m.mat());
  return sigma;
}

SpdTuple identity_tuple(const QuiverDatum& datum) {
  SpdTuple sigma;
  for (int bp : datum.beta.beta_plus) sigma.push_back(SpdMatrix::identity(bp));
  return sigma;
}

CapacityReport solve(const QuiverDatum& datum, const SolverOptions& opts) {
  return solve_from(datum, identity_tuple(datum), opts);
}

CapacityReport solve_from(const QuiverDatum& datum, SpdTuple start, const SolverOptions& opts) {
  require_solvable(datum);
  SpdTuple sigma = det_normalize(datum, std::move(start));

  std::vector<double> trace;
  const double log_floor = std::log(opts.cap_floor);
  double last_residual = std::numeric_limits<double>::quiet_NaN();

  for (int iter = 0;; ++iter) {
    std::vector<SpdMatrix> aggs;
    try {
      aggs = certified_aggregates(datum, sigma);
    } catch (const SingularAggregate&) {
      return infeasible_report(iter, last_residual, std::move(trace));
    }
    const double lc = log_cap_from(datum, sigma, aggs);
    trace.push_back(std::exp(lc));

    if (lc < log_floor) return infeasible_report(iter, last_residual, std::move(trace));

    std::vector<SpdMatrix> agg_inv;
    agg_inv.reserve(aggs.size());
    for (const SpdMatrix& m : aggs) agg_inv.push_back(spd_inverse(m));
    const std::vector<Matrix> brackets = stationarity_sums(datum, agg_inv);
    const double res = residual_from(sigma, brackets);
    last_residual = res;

    if (res <= opts.tol) {
      CapacityReport r;
      r.status = SolveStatus::Converged;
      r.cap = std::exp(lc);
      r.log_cap = lc;
      r.ajn_constant = -0.5 * lc;
      r.extremizer = sigma;
      r.iterations = iter;
      r.final_residual = res;
      r.cap_trace = std::move(trace);
      return r;
    }
    if (iter >= opts.max_iter) {
      CapacityReport r;
      r.status = SolveStatus::MaxIterations;
      r.cap = std::exp(lc);  // upper estimate only
      r.log_cap = lc;
      r.ajn_constant = -0.5 * lc;
      r.iterations = iter;
      r.final_residual = res;
      r.cap_trace = std::move(trace);
      return r;
    }

    SpdTuple next;
    try {
      next = step_from(datum, sigma, brackets, opts.damping);
    } catch (const SingularUpdate&) {
      return infeasible_report(iter, res, std::move(trace));
    }

    // The iteration is not proven monotone; when a step raises the
    // functional, retry once at damping 1/2 and take whatever that gives.
    bool next_evaluates = true;
    double lc_next = 0.0;
    try {
      lc_next = log_cap_at(datum, next);
    } catch (const SingularAggregate&) {
      next_evaluates = false;  // let the next round report infeasibility
    }
    if (next_evaluates && lc_next > lc + 1e-12) {
      try {
        next = step_from(datum, sigma, brackets, std::max(opts.damping, 0.5));
      } catch (const SingularUpdate&) {
        return infeasible_report(iter, res, std::move(trace));
      }
    }
    sigma = std::move(next);
  }
}

CapacityReport ajn_solve(const AjnDatum& ajn, const SolverOptions& opts) {
  return solve(from_ajn(ajn), opts);
}

}  // namespace qcap
