#include "critflow/hypmodel.hpp"

#include "critflow/error.hpp"

#include <algorithm>
#include <cmath>

namespace critflow::hyp {

namespace {

Eigen::MatrixXd minkowski_gram(int dim) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Identity(dim, dim);
  j(0, 0) = -1.0;
  return j;
}

void check_finite(const Eigen::VectorXd& v, const char* what) {
  if (v.size() < 3) throw InputError(std::string(what) + " needs at least 3 coordinates (n >= 2)");
  if (!v.allFinite()) throw InputError(std::string(what) + " has non-finite coordinates");
}

void check_same_dim(long a, long b) {
  if (a != b) throw InputError("dimension mismatch between hyperboloid objects");
}

}  // namespace

double minkowski(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  check_same_dim(a.size(), b.size());
  return -a(0) * b(0) + a.tail(a.size() - 1).dot(b.tail(b.size() - 1));
}

MinkPoint::MinkPoint(Eigen::VectorXd coords) : c_(std::move(coords)) {
  check_finite(c_, "MinkPoint");
  if (!(c_(0) > 0.0)) throw InputError("MinkPoint must lie on the upper sheet (x0 > 0)");
  // Far-out orbit points have huge coordinates; measure the defect relative to x0^2.
  const double defect = std::abs(minkowski(c_, c_) + 1.0);
  if (defect > kPointTol * std::max(1.0, c_(0) * c_(0)))
    throw InputError("MinkPoint is off the hyperboloid: |<x,x>+1| = " + std::to_string(defect));
}

MinkPoint MinkPoint::project(const Eigen::VectorXd& v) {
  check_finite(v, "MinkPoint");
  const double q = -minkowski(v, v);
  if (!(q > 0.0) || !(v(0) > 0.0)) throw NumericalError("cannot project a non-timelike vector onto the hyperboloid");
  Eigen::VectorXd c = v;
  // Rescaling by sqrt(q) carries the cancellation error of q (about eps x0^2)
  // into every coordinate. When the defect is at that level, lift vertically.
  if (std::abs(q - 1.0) > 1e-6 * std::max(1.0, v(0) * v(0))) c /= std::sqrt(q);
  c(0) = std::sqrt(1.0 + c.tail(c.size() - 1).squaredNorm());
  return MinkPoint(std::move(c), Unchecked{});
}

MinkPoint MinkPoint::basepoint(int n) {
  if (n < 1) throw InputError("hyperbolic dimension must be positive");
  Eigen::VectorXd c = Eigen::VectorXd::Zero(n + 1);
  c(0) = 1.0;
  return MinkPoint(std::move(c), Unchecked{});
}

TangentVec::TangentVec(MinkPoint base, Eigen::VectorXd coords) : base_(std::move(base)), c_(std::move(coords)) {
  check_same_dim(base_.coords().size(), c_.size());
  if (!c_.allFinite()) throw InputError("TangentVec has non-finite coordinates");
  const double scale = std::max(1.0, base_.coords()(0)) * std::max(1.0, c_.norm());
  if (std::abs(minkowski(base_.coords(), c_)) > kTangentTol * scale)
    throw InputError("vector is not tangent to the hyperboloid at its base");
}

TangentVec TangentVec::project(const MinkPoint& base, const Eigen::VectorXd& v) {
  const Eigen::VectorXd& x = base.coords();
  return TangentVec(base, v + minkowski(v, x) * x);
}

double TangentVec::norm() const { return std::sqrt(std::max(minkowski(c_, c_), 0.0)); }

TangentVec TangentVec::normalized() const {
  const double len = norm();
  if (!(len > 0.0)) throw InputError("cannot normalize a zero tangent vector");
  return TangentVec(base_, c_ / len);
}

BoundaryPoint::BoundaryPoint(const Eigen::VectorXd& null_vector) {
  check_finite(null_vector, "BoundaryPoint");
  if (!(null_vector(0) > 0.0)) throw InputError("BoundaryPoint must be future-pointing (b0 > 0)");
  c_ = null_vector / null_vector(0);
  if (std::abs(minkowski(c_, c_)) > kPointTol) throw InputError("BoundaryPoint is not a null vector");
}

BoundaryPoint BoundaryPoint::from_direction(const Eigen::VectorXd& xi) {
  const double len = xi.norm();
  if (!(len > 0.0) || !std::isfinite(len)) throw InputError("boundary direction must be a nonzero finite vector");
  Eigen::VectorXd c(xi.size() + 1);
  c(0) = 1.0;
  c.tail(xi.size()) = xi / len;
  return BoundaryPoint(c);
}

Isometry::Isometry(Eigen::MatrixXd m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() < 3) throw InputError("isometry must be a square matrix of size n+1 >= 3");
  if (!m_.allFinite()) throw InputError("isometry has non-finite entries");
  const Eigen::MatrixXd j = minkowski_gram(static_cast<int>(m_.rows()));
  const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
  const double err = (m_.transpose() * j * m_ - j).cwiseAbs().maxCoeff();
  if (err > 1e-9 * scale * scale) throw InputError("matrix does not preserve the Minkowski form");
  if (!(m_(0, 0) > 0.0)) throw InputError("isometry must be orthochronous");
}

Isometry Isometry::identity(int n) {
  return Isometry(Eigen::MatrixXd::Identity(n + 1, n + 1), Unchecked{});
}

Isometry Isometry::boost(const Eigen::VectorXd& xi, double t) {
  const double len = xi.norm();
  if (!(len > 0.0) || !std::isfinite(t)) throw InputError("boost needs a nonzero direction and finite length");
  const int n = static_cast<int>(xi.size());
  Eigen::VectorXd u = Eigen::VectorXd::Zero(n + 1);
  u.tail(n) = xi / len;
  Eigen::VectorXd e0 = Eigen::VectorXd::Zero(n + 1);
  e0(0) = 1.0;
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n + 1, n + 1);
  m += (std::cosh(t) - 1.0) * (u * u.transpose() + e0 * e0.transpose());
  m += std::sinh(t) * (e0 * u.transpose() + u * e0.transpose());
  return Isometry(std::move(m));
}

Isometry Isometry::rotation(const Eigen::MatrixXd& r) {
  if (r.rows() != r.cols()) throw InputError("rotation must be square");
  const long n = r.rows();
  if ((r.transpose() * r - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-9)
    throw InputError("rotation is not orthogonal");
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n + 1, n + 1);
  m.bottomRightCorner(n, n) = r;
  return Isometry(std::move(m));
}

Isometry Isometry::translation_to(const MinkPoint& x) {
  const Eigen::VectorXd& c = x.coords();
  const long n = c.size() - 1;
  const Eigen::VectorXd y = c.tail(n);
  Eigen::MatrixXd m(n + 1, n + 1);
  m(0, 0) = c(0);
  m.block(0, 1, 1, n) = y.transpose();
  m.block(1, 0, n, 1) = y;
  m.bottomRightCorner(n, n) = Eigen::MatrixXd::Identity(n, n) + y * y.transpose() / (1.0 + c(0));
  return Isometry(std::move(m), Unchecked{});
}

Isometry Isometry::operator*(const Isometry& other) const {
  check_same_dim(m_.rows(), other.m_.rows());
  return Isometry(m_ * other.m_, Unchecked{});
}

Isometry Isometry::inverse() const {
  const Eigen::MatrixXd j = minkowski_gram(static_cast<int>(m_.rows()));
  return Isometry(j * m_.transpose() * j, Unchecked{});
}

double distance(const MinkPoint& x, const MinkPoint& y) {
  // arccosh(-<x,y>) loses half the digits near 0; use the chord length instead.
  // The chord itself cancels for far-out points, so only trust it when the
  // pairing agrees the points are close.
  const double q = -minkowski(x.coords(), y.coords());
  if (q < 1.5) {
    const Eigen::VectorXd d = x.coords() - y.coords();
    const double chord2 = minkowski(d, d);
    if (chord2 < 1.0) return 2.0 * std::asinh(std::sqrt(std::max(chord2, 0.0)) / 2.0);
  }
  return std::acosh(std::max(q, 1.0));
}

Eigen::MatrixXd tangent_basis(const MinkPoint& x) {
  const Isometry l = Isometry::translation_to(x);
  return l.matrix().rightCols(x.n());
}

namespace {

// -<x,b> = x0 - xs.xi. Toward b both terms grow like e^t while the
// difference decays like e^-t, so use x0^2 = 1 + |xs|^2 to rewrite it as
// (x0^2 - (xs.xi)^2) / (x0 + xs.xi) with the numerator formed without cancellation.
double neg_pairing(const MinkPoint& x, const BoundaryPoint& b) {
  check_same_dim(x.coords().size(), b.coords().size());
  const long n = x.coords().size() - 1;
  const auto xs = x.coords().tail(n);
  const double x0 = x.coords()(0);
  // b0 = 1, so xi is a unit vector up to rounding; treat it as exactly unit.
  const Eigen::VectorXd xi = b.coords().tail(n).normalized();
  const double dot = xs.dot(xi);
  if (dot <= 0.0) return x0 - dot;
  return (1.0 + (xs - dot * xi).squaredNorm()) / (x0 + dot);
}

}  // namespace

double busemann(const MinkPoint& x, const BoundaryPoint& b) {
  const double s = neg_pairing(x, b);
  if (!(s > 0.0)) throw NumericalError("-<x,b> must be positive; point or boundary data is corrupted");
  return std::log(s);
}

TangentVec busemann_gradient(const MinkPoint& x, const BoundaryPoint& b) {
  const double s = neg_pairing(x, b);
  if (!(s > 0.0)) throw NumericalError("-<x,b> must be positive; point or boundary data is corrupted");
  return TangentVec::project(x, x.coords() - b.coords() / s);
}

symform::SymBilinearForm busemann_hessian(const MinkPoint& x, const BoundaryPoint& b) {
  return busemann_hessian(x, b, tangent_basis(x));
}

symform::SymBilinearForm busemann_hessian(const MinkPoint& x, const BoundaryPoint& b,
                                          const Eigen::MatrixXd& basis) {
  if (basis.rows() != x.coords().size()) throw InputError("tangent basis has the wrong ambient dimension");
  const Eigen::VectorXd grad = busemann_gradient(x, b).coords();
  const long k = basis.cols();
  Eigen::VectorXd g(k);
  Eigen::MatrixXd gram(k, k);
  for (long i = 0; i < k; ++i) {
    g(i) = minkowski(grad, basis.col(i));
    for (long j = 0; j < k; ++j) gram(i, j) = minkowski(basis.col(i), basis.col(j));
  }
  return symform::SymBilinearForm(gram - g * g.transpose());
}

MinkPoint exp_map(const MinkPoint& x, const TangentVec& v, double t) {
  if (std::abs(v.norm() - 1.0) > kTangentTol) throw InputError("exp_map needs a unit tangent vector");
  check_same_dim(x.coords().size(), v.coords().size());
  return MinkPoint::project(std::cosh(t) * x.coords() + std::sinh(t) * v.coords());
}

TangentVec geodesic_velocity(const MinkPoint& x, const TangentVec& v, double t) {
  const MinkPoint y = exp_map(x, v, t);
  return TangentVec::project(y, std::sinh(t) * x.coords() + std::cosh(t) * v.coords());
}

BoundaryPoint boundary_endpoint(const MinkPoint& x, const TangentVec& v) {
  if (std::abs(v.norm() - 1.0) > kTangentTol) throw InputError("boundary_endpoint needs a unit tangent vector");
  const Eigen::VectorXd c = x.coords() + v.coords();
  // Recompute b0 from the spatial part so the result is exactly null.
  const Eigen::VectorXd xi = c.tail(c.size() - 1);
  return BoundaryPoint::from_direction(xi);
}

MinkPoint apply(const Isometry& g, const MinkPoint& x) {
  check_same_dim(g.matrix().rows(), x.coords().size());
  return MinkPoint::project(g.matrix() * x.coords());
}

BoundaryPoint apply(const Isometry& g, const BoundaryPoint& b) {
  check_same_dim(g.matrix().rows(), b.coords().size());
  const Eigen::VectorXd c = g.matrix() * b.coords();
  return BoundaryPoint::from_direction(c.tail(c.size() - 1));
}

TangentVec apply(const Isometry& g, const TangentVec& v) {
  const MinkPoint y = apply(g, v.base());
  return TangentVec::project(y, g.matrix() * v.coords());
}

}  // namespace critflow::hyp
