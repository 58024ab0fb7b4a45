#pragma once

// Capacity of a quiver datum via the source-side determinant formula
//
//   cap = inf over SPD tuples Sigma of
//         prod_j det(M_j(Sigma))^{sigma_-(w_j)} / prod_i det(Sigma_i)^{sigma_+(v_i)},
//   M_j(Sigma) = sum_i sigma_+(v_i) * sum_{a: v_i -> w_j} V(a) Sigma_i V(a)^T,
//
// minimized by iterating the stationarity system
//
//   Sigma_i^{-1} = sum_j sigma_-(w_j) * sum_a V(a)^T M_j^{-1} V(a)
//
// as a fixed point. Iterating on the source tuple keeps every matrix at
// vertex size instead of N x N. All determinant products live in log space;
// every tuple is renormalized to prod det(Sigma_i)^{sigma_+(v_i)} = 1, which
// the balance condition makes capacity-neutral.

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "qcap/quiver.hpp"

namespace qcap {

using SpdTuple = std::vector<SpdMatrix>;

struct SolverOptions {
  double tol = 1e-8;
  int max_iter = 10000;
  double cap_floor = 1e-12;  // cap below this is declared numerically infeasible
  double damping = 0.0;      // in [0,1); log-space blend toward the previous iterate
  std::uint64_t seed = 0;    // consumed by randomized callers (probe, violator search)
};

enum class SolveStatus { Converged, Infeasible, MaxIterations };

struct CapacityReport {
  SolveStatus status = SolveStatus::MaxIterations;
  double cap = 0.0;
  double log_cap = 0.0;
  double ajn_constant = std::numeric_limits<double>::infinity();  // -log(cap)/2
  std::optional<SpdTuple> extremizer;  // present exactly when Converged
  int iterations = 0;
  double final_residual = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> cap_trace;  // cap value probed at each iteration
};

// M_j(Sigma) for every sink, symmetrized. Possibly singular; positive
// definiteness is certified by the consumers.
std::vector<Matrix> sink_aggregates(const QuiverDatum& datum, const SpdTuple& sigma);

// log of the capacity functional at Sigma. Throws SingularAggregate when some
// M_j fails to be positive definite.
double log_cap_at(const QuiverDatum& datum, const SpdTuple& sigma);
double cap_at(const QuiverDatum& datum, const SpdTuple& sigma);

// One fixed-point update, det-normalized. Throws SingularAggregate or, when
// the stationarity sum has a kernel (an infeasibility certificate direction),
// SingularUpdate.
SpdTuple fixed_point_step(const QuiverDatum& datum, const SpdTuple& sigma, double damping = 0.0);

// Relative stationarity residual: max_i ||B_i - Sigma_i^{-1}||_F / ||Sigma_i^{-1}||_F
// with B_i the right-hand side of the fixed-point system.
double residual(const QuiverDatum& datum, const SpdTuple& sigma);

// Rescale so that prod det(Sigma_i)^{sigma_+(v_i)} = 1.
SpdTuple det_normalize(const QuiverDatum& datum, SpdTuple sigma);

// Fixed-point iteration from the identity tuple. Throws ZeroRepresentation on
// a zero representation and std::invalid_argument on an invalid datum.
CapacityReport solve(const QuiverDatum& datum, const SolverOptions& opts = {});

// Same, from a caller-supplied starting tuple (det-normalized first).
CapacityReport solve_from(const QuiverDatum& datum, SpdTuple start, const SolverOptions& opts = {});

// Solve the quiver datum of an AJN datum; ajn_constant is -log(cap)/2, or
// +infinity when infeasible.
CapacityReport ajn_solve(const AjnDatum& ajn, const SolverOptions& opts = {});

SpdTuple identity_tuple(const QuiverDatum& datum);

}  // namespace qcap
