#pragma once

// Random inputs shared by the unit tests and the acceptance runner.

#include "critflow/hypmodel.hpp"
#include "critflow/psflow.hpp"
#include "critflow/symform.hpp"

#include <Eigen/Dense>

#include <random>
#include <vector>

namespace support {

using Rng = std::mt19937_64;

inline Eigen::MatrixXd random_symmetric(Rng& rng, int dim, double scale = 1.0) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = scale * g(rng);
  return 0.5 * (m + m.transpose());
}

// Orthonormal k-frame in R^dim (Haar via QR of a Gaussian matrix).
inline Eigen::MatrixXd random_frame(Rng& rng, int dim, int k) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd m(dim, k);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < k; ++j) m(i, j) = g(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  return qr.householderQ() * Eigen::MatrixXd::Identity(dim, k);
}

inline Eigen::VectorXd random_unit(Rng& rng, int dim) {
  std::normal_distribution<double> g;
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = g(rng);
  return v / v.norm();
}

inline critflow::hyp::TangentVec random_unit_tangent(Rng& rng, const critflow::hyp::MinkPoint& x) {
  const Eigen::MatrixXd e = critflow::hyp::tangent_basis(x);
  return critflow::hyp::TangentVec::project(x, e * random_unit(rng, x.n()));
}

// A point at distance up to max_radius from e0 in a random direction.
inline critflow::hyp::MinkPoint random_point(Rng& rng, int n, double max_radius) {
  std::uniform_real_distribution<double> u(0.0, max_radius);
  const auto p = critflow::hyp::MinkPoint::basepoint(n);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n + 1);
  v.tail(n) = random_unit(rng, n);
  return critflow::hyp::exp_map(p, critflow::hyp::TangentVec(p, v), u(rng));
}

inline critflow::hyp::BoundaryPoint random_boundary(Rng& rng, int n) {
  return critflow::hyp::BoundaryPoint::from_direction(random_unit(rng, n));
}

// Random Lorentz isometry: rotation, then boost.
inline critflow::hyp::Isometry random_isometry(Rng& rng, int n, double max_boost) {
  std::uniform_real_distribution<double> u(0.0, max_boost);
  Eigen::MatrixXd r = random_frame(rng, n, n);
  if (r.determinant() < 0) r.col(0) *= -1.0;
  return critflow::hyp::Isometry::boost(random_unit(rng, n), u(rng)) * critflow::hyp::Isometry::rotation(r);
}

inline critflow::psflow::DiscreteBoundaryDensity random_density(Rng& rng, int n, int atoms, double delta) {
  std::normal_distribution<double> g;
  std::vector<critflow::hyp::BoundaryPoint> pts;
  std::vector<double> lw;
  for (int i = 0; i < atoms; ++i) {
    pts.push_back(random_boundary(rng, n));
    lw.push_back(2.0 * g(rng));
  }
  return critflow::psflow::DiscreteBoundaryDensity(delta, pts, lw);
}

}  // namespace support
