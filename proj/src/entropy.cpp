#include "qcap/entropy.hpp"

#include <cmath>

namespace qcap {

namespace {
const double kLogTwoPiE = std::log(2.0 * 3.14159265358979323846 * std::exp(1.0));
}

double gaussian_entropy(const SpdMatrix& sigma) {
  return 0.5 * (sigma.dim() * kLogTwoPiE + log_det(sigma));
}

double ajn_gap(const AjnDatum& ajn, const std::vector<SpdMatrix>& z) {
  const int k = static_cast<int>(ajn.d.size());
  const int m = static_cast<int>(ajn.n.size());
  if (static_cast<int>(z.size()) != k)
    throw DimensionMismatch("ajn_gap: need one covariance per source");
  for (int i = 0; i < k; ++i)
    if (z[i].dim() != ajn.d[i])
      throw DimensionMismatch("ajn_gap: covariance " + std::to_string(i + 1) +
                              " has dimension " + std::to_string(z[i].dim()) + ", expected " +
                              std::to_string(ajn.d[i]));

  double gap = 0.0;
  for (int i = 0; i < k; ++i) gap += ajn.c[i] * gaussian_entropy(z[i]);
  for (int j = 0; j < m; ++j) {
    Matrix cov(ajn.n[j], ajn.n[j]);
    for (int i = 0; i < k; ++i) add_scaled(cov, 1.0, sandwich_nt(ajn.A[i][j], z[i].mat()));
    try {
      gap -= ajn.p[j] * gaussian_entropy(SpdMatrix(cov));
    } catch (const NotPositiveDefinite&) {
      throw SingularAggregate("ajn_gap: output covariance " + std::to_string(j + 1) +
                              " is not positive definite");
    }
  }
  return gap;
}

}  // namespace qcap
