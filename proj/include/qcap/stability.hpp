#pragma once

// Semi-stability machinery: the King-style subspace inequality, a heuristic
// violator search, the endomorphism-algebra dimension, and a multi-start
// uniqueness probe for gaussian extremizers.

#include <cstdint>
#include <optional>
#include <utility>

#include "qcap/capacity.hpp"
#include "qcap/quiver.hpp"

namespace qcap {

// One subspace per source vertex, stored as a matrix with orthonormal columns
// (zero columns encode the zero subspace).
struct SubspaceTuple {
  std::vector<Matrix> bases;
};

struct ViolationReport {
  SubspaceTuple subspaces;
  int lhs = 0;    // sum_i sigma_+(v_i) dim V'(v_i)
  int rhs = 0;    // sum_j sigma_-(w_j) dim(sum of images)
  int slack = 0;  // lhs - rhs; > 0 certifies failure of semi-stability
};

ViolationReport slack_of(const QuiverDatum& datum, const SubspaceTuple& s);

// Searches coordinate subspace tuples (when few enough), kernel/small-singular
// subspaces of the stacked vertex maps, and random tuples refined by
// alternating descent on the image rank — up to `budget` slack evaluations.
// A returned tuple is an exact certificate of non-semi-stability; nothing
// found proves nothing.
std::optional<ViolationReport> find_violator(const QuiverDatum& datum, int budget = 10000,
                                             std::uint64_t seed = 0);

// Dimension of End(V): the solution space of phi(head) V(a) = V(a) phi(tail)
// over all matrix tuples phi. Always >= 1; == 1 means V is Schur.
int endomorphism_dimension(const QuiverDatum& datum);

enum class UniquenessVerdict { Unique, NonUnique, Inconclusive };

struct UniquenessReport {
  UniquenessVerdict verdict = UniquenessVerdict::Inconclusive;
  int restarts = 0;
  int converged = 0;
  double max_pair_deviation = 0.0;
  // Present for NonUnique: two det-normalized extremizers that disagree.
  std::optional<std::pair<SpdTuple, SpdTuple>> witness;
};

// Runs solve from `restarts` random SPD starting tuples (W W^T + 0.1 I,
// seeded) and compares the det-normalized limits entrywise: all within 1e-5
// of each other -> Unique; some pair apart by more than 1e-3 with both
// stationary -> NonUnique; anything else -> Inconclusive.
UniquenessReport uniqueness_probe(const QuiverDatum& datum, int restarts,
                                  const SolverOptions& opts = {}, int threads = 1);

// Shared metric: largest entrywise deviation between two tuples, measured
// relative to the larger max-abs entry of each matrix pair.
double tuple_deviation(const SpdTuple& a, const SpdTuple& b);

}  // namespace qcap
