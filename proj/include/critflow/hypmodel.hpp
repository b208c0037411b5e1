#pragma once

// Hyperboloid model of H^n inside R^{n+1} with the Minkowski form
// <x,y> = -x0*y0 + sum_i xi*yi. The standard basepoint is p = (1,0,...,0);
// ideal points are future null vectors b normalized by <b,p> = -1 (b0 = 1),
// which puts the Busemann function in the gauge B_b(p) = 0.

#include "critflow/symform.hpp"

#include <Eigen/Dense>

namespace critflow::hyp {

inline constexpr double kPointTol = 1e-10;
inline constexpr double kTangentTol = 1e-9;

double minkowski(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

class MinkPoint {
 public:
  // Validates <x,x> = -1 (relative to the size of x) and x0 > 0.
  explicit MinkPoint(Eigen::VectorXd coords);
  // Rescales onto the upper sheet: x / sqrt(-<x,x>).
  static MinkPoint project(const Eigen::VectorXd& v);
  static MinkPoint basepoint(int n);

  int n() const { return static_cast<int>(c_.size()) - 1; }
  const Eigen::VectorXd& coords() const { return c_; }

 private:
  struct Unchecked {};
  MinkPoint(Eigen::VectorXd coords, Unchecked) : c_(std::move(coords)) {}
  Eigen::VectorXd c_;
};

class TangentVec {
 public:
  TangentVec(MinkPoint base, Eigen::VectorXd coords);
  // Removes the normal component: v + <v,x> x.
  static TangentVec project(const MinkPoint& base, const Eigen::VectorXd& v);

  const MinkPoint& base() const { return base_; }
  const Eigen::VectorXd& coords() const { return c_; }
  double norm() const;
  TangentVec normalized() const;

 private:
  MinkPoint base_;
  Eigen::VectorXd c_;
};

class BoundaryPoint {
 public:
  // Any future-pointing null vector; stored rescaled to b0 = 1.
  explicit BoundaryPoint(const Eigen::VectorXd& null_vector);
  // The ideal point seen from p in the unit direction xi of R^n.
  static BoundaryPoint from_direction(const Eigen::VectorXd& xi);

  int n() const { return static_cast<int>(c_.size()) - 1; }
  const Eigen::VectorXd& coords() const { return c_; }
  Eigen::VectorXd direction() const { return c_.tail(c_.size() - 1); }

 private:
  Eigen::VectorXd c_;
};

class Isometry {
 public:
  // Validates m^T J m = J and m(0,0) > 0.
  explicit Isometry(Eigen::MatrixXd m);
  static Isometry identity(int n);
  // Translation by t along the geodesic through p in unit direction xi.
  static Isometry boost(const Eigen::VectorXd& xi, double t);
  // Rotation fixing p; r must be orthogonal with det 1.
  static Isometry rotation(const Eigen::MatrixXd& r);
  // The boost carrying p to x.
  static Isometry translation_to(const MinkPoint& x);

  int n() const { return static_cast<int>(m_.rows()) - 1; }
  const Eigen::MatrixXd& matrix() const { return m_; }
  Isometry operator*(const Isometry& other) const;
  // J m^T J.
  Isometry inverse() const;

 private:
  struct Unchecked {};
  Isometry(Eigen::MatrixXd m, Unchecked) : m_(std::move(m)) {}
  Eigen::MatrixXd m_;
};

double distance(const MinkPoint& x, const MinkPoint& y);

// Orthonormal basis of T_x as columns of an (n+1) x n matrix.
Eigen::MatrixXd tangent_basis(const MinkPoint& x);

// B_b(x) = log(-<x,b>), zero at p.
double busemann(const MinkPoint& x, const BoundaryPoint& b);
TangentVec busemann_gradient(const MinkPoint& x, const BoundaryPoint& b);
// g - dB (x) dB on T_x, written in tangent_basis(x).
symform::SymBilinearForm busemann_hessian(const MinkPoint& x, const BoundaryPoint& b);
// Same form in a caller-supplied orthonormal tangent basis.
symform::SymBilinearForm busemann_hessian(const MinkPoint& x, const BoundaryPoint& b,
                                          const Eigen::MatrixXd& basis);

MinkPoint exp_map(const MinkPoint& x, const TangentVec& v, double t);
// Velocity of t -> exp_map(x, v, t) at time t.
TangentVec geodesic_velocity(const MinkPoint& x, const TangentVec& v, double t);

BoundaryPoint boundary_endpoint(const MinkPoint& x, const TangentVec& v);

MinkPoint apply(const Isometry& g, const MinkPoint& x);
BoundaryPoint apply(const Isometry& g, const BoundaryPoint& b);
TangentVec apply(const Isometry& g, const TangentVec& v);

}  // namespace critflow::hyp
