#pragma once

// Data model for bipartite quiver data and their AJN frontend.
//
// A bipartite quiver has k source vertices and m sink vertices with all
// arrows source -> sink; several parallel arrows per (source, sink) pair are
// allowed, and "no arrow" is expressed by simply omitting the pair. Weights
// are stored as positive integers on both sides (sigma itself is +sigma_plus
// on sources and -sigma_minus on sinks).

#include <map>
#include <string>
#include <vector>

#include "qcap/matrix.hpp"

namespace qcap {

struct Arrow {
  int source = 0;  // 0-based index into [k]
  int sink = 0;    // 0-based index into [m]
};

struct BipartiteQuiver {
  int k = 0;
  int m = 0;
  std::vector<Arrow> arrows;  // arrow id == position in this vector
};

struct Weight {
  std::vector<int> sigma_plus;   // per source, > 0
  std::vector<int> sigma_minus;  // per sink, > 0
};

struct DimensionVector {
  std::vector<int> beta_plus;   // per source, > 0
  std::vector<int> beta_minus;  // per sink, > 0
};

struct QuiverRepresentation {
  std::vector<Matrix> maps;  // maps[a] is beta_minus(sink) x beta_plus(source)
};

struct QuiverDatum {
  BipartiteQuiver quiver;
  DimensionVector beta;
  Weight sigma;
  QuiverRepresentation rep;

  // Sigma-weighted total dimension on the source side; balance makes the
  // sink side equal.
  int total_dim_plus() const;
  int total_dim_minus() const;
  bool is_zero_representation() const;
};

struct AjnDatum {
  std::vector<int> d;                    // source dimensions
  std::vector<int> n;                    // sink dimensions
  std::vector<int> c;                    // source exponents
  std::vector<int> p;                    // sink exponents
  std::vector<std::vector<Matrix>> A;    // A[i][j] is n_j x d_i
};

struct Finding {
  enum class Severity { Error, Warning };
  Severity severity;
  std::string message;
};

// Collects every violated invariant: weight signs, balance, arrow indices,
// map shapes, connectivity, non-finite entries. A zero representation is a
// warning, not an error.
std::vector<Finding> validate(const QuiverDatum& datum);
bool is_valid(const QuiverDatum& datum);

// One error line per finding, for exception messages.
std::string describe(const std::vector<Finding>& findings);

// Builds the complete-bipartite quiver datum of an AJN datum: one arrow per
// (i, j), map (1/sqrt(c_i)) * A_ij, beta = (d, n), sigma = (c, p).
// Throws InvalidAjn when balance or surjectivity fails.
QuiverDatum from_ajn(const AjnDatum& ajn);

// True per sink j iff the stacked map [A_1j ... A_kj] has full row rank.
std::vector<bool> check_surjective(const AjnDatum& ajn, double tol = 1e-10);

std::vector<Finding> validate_ajn(const AjnDatum& ajn);

}  // namespace qcap
