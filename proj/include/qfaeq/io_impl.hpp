#pragma once

#include <random>

namespace qfaeq {

template <typename Rng> auto haar_unitary(Eigen::Index n, Rng &rng) -> CMatrix
{
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix                          g(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      double const re = normal(rng);
      double const im = normal(rng);
      g(i, j) = Cx(re, im) / std::sqrt(2.0);
    }
  }
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix                       q = qr.householderQ();
  auto const                   &r = qr.matrixQR();
  for (Eigen::Index j = 0; j < n; ++j) {
    auto const d = r(j, j);
    auto const mag = std::abs(d);
    q.col(j) *= mag > 0 ? d / mag : Cx(1.0, 0.0);
  }
  return q;
}

} // namespace qfaeq
