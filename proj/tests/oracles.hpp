#pragma once

#include <Eigen/Dense>

#include "sandlab/lattice.hpp"

namespace sandlab::testing {

// Dense Delta_L: h_c on the diagonal, -1 per neighbor edge.
inline Eigen::MatrixXd dense_delta(const ModelParams& p) {
  const Lattice lat(p);
  const int N = lat.sites();
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(N, N);
  for (SiteIndex i = 0; i < N; ++i) {
    D(i, i) += p.hc();
    for (SiteIndex j : lat.neighbors(i)) D(i, j) -= 1.0;
  }
  return D;
}

inline double dense_log_det(const ModelParams& p) {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(dense_delta(p));
  const Eigen::MatrixXd U = lu.matrixLU();
  double s = 0.0;
  for (int i = 0; i < U.rows(); ++i) s += std::log(std::abs(U(i, i)));
  return s;
}

}  // namespace sandlab::testing
