#pragma once

// Differential entropy of centered Gaussians and the entropic gap of an AJN
// datum. Everything in nats so that the gap relates to the capacity by
// gap = -log(cap_at)/2 with no base conversions.

#include "qcap/quiver.hpp"

namespace qcap {

// (d log(2 pi e) + log det Sigma) / 2.
double gaussian_entropy(const SpdMatrix& sigma);

// For independent sources Z_i ~ N(0, Sigma_i):
//   sum_i c_i h(Z_i) - sum_j p_j h(A_j Z),  cov(A_j Z) = sum_i A_ij Sigma_i A_ij^T.
// Throws SingularAggregate when some output covariance is not positive
// definite.
double ajn_gap(const AjnDatum& ajn, const std::vector<SpdMatrix>& z);

}  // namespace qcap
