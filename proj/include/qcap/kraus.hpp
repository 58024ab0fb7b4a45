#pragma once

// The completely positive operator of a quiver datum and its dual.
//
// Index bookkeeping follows the block picture: an N x N matrix is split into
// M block rows (block q belongs to sink j when q lies in the interval
// iminus[j], and has height beta_minus(j)) and M' block columns (block r in
// iplus[i] has width beta_plus(i)). One Kraus operator exists per
// (arrow, q, r) with q in the arrow's sink interval and r in its source
// interval; it carries the arrow's map V(a) in block (q, r) and zero
// elsewhere. Kraus operators are never materialized densely here: applying
// one touches a single diagonal block of the argument.

#include <utility>
#include <vector>

#include "qcap/quiver.hpp"

namespace qcap {

struct IndexLayout {
  int N = 0;       // total matrix size
  int M = 0;       // sum of sigma_minus (number of block rows)
  int Mprime = 0;  // sum of sigma_plus (number of block columns)

  // Half-open block index intervals, 0-based: iminus[j] = [begin, end).
  std::vector<std::pair<int, int>> iminus;
  std::vector<std::pair<int, int>> iplus;

  // Per block row q: owning sink and scalar row offset. Heights are
  // beta_minus(qblock_sink[q]).
  std::vector<int> qblock_sink;
  std::vector<int> qblock_offset;
  // Per block column r: owning source and scalar column offset.
  std::vector<int> rblock_source;
  std::vector<int> rblock_offset;
};

struct KrausDescriptor {
  int source = 0;
  int sink = 0;
  int arrow = 0;  // arrow id
  int q = 0;      // block row
  int r = 0;      // block column
  Matrix block;   // V(a), beta_minus(sink) x beta_plus(source)
};

struct KrausSystem {
  IndexLayout layout;
  std::vector<KrausDescriptor> ops;
};

// Throws Imbalance when sigma.beta differs between the two sides.
IndexLayout build_layout(const QuiverDatum& datum);

KrausSystem build_kraus(const QuiverDatum& datum);

// T(X) = sum over Kraus operators K of K^T X K. Block diagonal with respect
// to the column (iplus) layout. X must be N x N (treated as symmetric).
Matrix apply_T(const KrausSystem& ks, const Matrix& x);

// Dual: T*(X) = sum of K X K^T; block diagonal with respect to the row
// (iminus) layout.
Matrix apply_T_star(const KrausSystem& ks, const Matrix& x);

// Frobenius distances of the two doubly-stochastic matrix equations from the
// identity: first the per-source residuals, then the per-sink residuals. Both
// all zero exactly when the datum is geometric.
std::pair<std::vector<double>, std::vector<double>> ds_residual(const QuiverDatum& datum);

}  // namespace qcap
