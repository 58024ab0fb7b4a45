#pragma once

// Base-change group action on quiver data, the weight character, and the
// constructions that move a converged extremizer to geometric (doubly
// stochastic) form.

#include "qcap/capacity.hpp"
#include "qcap/quiver.hpp"

namespace qcap {

struct GroupElement {
  std::vector<Matrix> gv;  // per source, beta_plus(i) x beta_plus(i), invertible
  std::vector<Matrix> gw;  // per sink

  static GroupElement identity(const QuiverDatum& datum);
};

// (g.V)(a) = g(head) V(a) g(tail)^{-1}. Throws SingularBlock when a block is
// not safely invertible (|det| <= 1e-12 times its Hadamard bound).
QuiverDatum act(const GroupElement& g, const QuiverDatum& datum);

// chi_sigma(g) = prod det(gv_i)^{sigma_+(v_i)} * prod det(gw_j)^{-sigma_-(w_j)},
// evaluated through log|det| with separate sign tracking.
double character(const GroupElement& g, const Weight& sigma);
double log_abs_character(const GroupElement& g, const Weight& sigma);

struct GeometryCheck {
  bool geometric = false;
  std::vector<double> source_residuals;
  std::vector<double> sink_residuals;
};

GeometryCheck is_geometric(const QuiverDatum& datum, double tol);

// g with gv_i = Sigma_i^{-1/2} and gw_j = M_j(Sigma)^{-1/2}; acting by g
// takes the datum to geometric form. Throws NotExtremal when Sigma is not
// stationary at tolerance tol.
GroupElement extremizer_to_group(const QuiverDatum& datum, const SpdTuple& sigma, double tol);

// The tuple (gv_i^{-1} gv_i^{-T})_i.
SpdTuple gaussian_extremizers_from_group(const GroupElement& g);

struct CharacterFormulaReport {
  double cap_v = 0.0;
  double cap_gv = 0.0;
  double chi = 0.0;
  double rel_error = 0.0;  // |cap(V) - chi^2 cap(g.V)| / cap(V)
  CapacityReport solve_v;
  CapacityReport solve_gv;
};

// Solves both data and checks cap(V) = chi_sigma(g)^2 * cap(g.V).
CharacterFormulaReport verify_character_formula(const QuiverDatum& datum, const GroupElement& g,
                                                const SolverOptions& opts = {});

struct DecompositionReport {
  CapacityReport full;
  CapacityReport first;
  CapacityReport second;
  double cap_rel_error = 0.0;       // |cap - cap1*cap2| / cap
  double constant_abs_error = 0.0;  // |M - M1 - M2|
};

// For a datum whose maps are all upper block triangular with respect to the
// split beta = beta1 + beta2 (lower-left blocks exactly zero) and with
// sigma . beta1 = 0: extracts the two diagonal-block data, solves all three,
// and reports how well cap(V) = cap(V1) * cap(V2) holds. Throws
// SplitImbalance or NotTriangular when the preconditions fail.
DecompositionReport verify_decomposition(const QuiverDatum& datum, const DimensionVector& beta1,
                                         const SolverOptions& opts = {});

}  // namespace qcap
