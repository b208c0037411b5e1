#include "critflow/symform.hpp"

#include "critflow/error.hpp"

#include <algorithm>
#include <string>

namespace critflow::symform {

namespace {

bool is_diagonal(const Eigen::MatrixXd& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (i != j && m(i, j) != 0.0) return false;
  return true;
}

}  // namespace

SymBilinearForm::SymBilinearForm(const Eigen::MatrixXd& entries) {
  if (entries.rows() == 0 || entries.rows() != entries.cols())
    throw InputError("symmetric form needs a non-empty square matrix");
  if (!entries.allFinite())
    throw InputError("symmetric form has non-finite entries");
  m_ = 0.5 * (entries + entries.transpose());
}

SymBilinearForm SymBilinearForm::diagonal(std::span<const double> values) {
  Eigen::VectorXd d(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) d(static_cast<Eigen::Index>(i)) = values[i];
  return SymBilinearForm(d.asDiagonal().toDenseMatrix());
}

SymBilinearForm SymBilinearForm::identity(int dim) {
  return SymBilinearForm(Eigen::MatrixXd::Identity(dim, dim));
}

double SymBilinearForm::evaluate(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const {
  return u.dot(m_ * v);
}

SymBilinearForm SymBilinearForm::operator+(const SymBilinearForm& other) const {
  if (other.dim() != dim()) throw InputError("dimension mismatch in form sum");
  return SymBilinearForm(m_ + other.m_);
}

SymBilinearForm SymBilinearForm::scaled(double c) const { return SymBilinearForm(c * m_); }

std::vector<double> eigenvalues_ascending(const SymBilinearForm& a) {
  const auto& m = a.matrix();
  std::vector<double> out(static_cast<std::size_t>(a.dim()));
  if (is_diagonal(m)) {
    // Exact: integer spectra (rank-one tables) must compare exactly.
    for (int i = 0; i < a.dim(); ++i) out[static_cast<std::size_t>(i)] = m(i, i);
    std::sort(out.begin(), out.end());
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("eigensolver failed to converge");
  for (int i = 0; i < a.dim(); ++i) out[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
  return out;
}

Eigen::MatrixXd eigenvectors_ascending(const SymBilinearForm& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a.matrix());
  if (es.info() != Eigen::Success) throw NumericalError("eigensolver failed to converge");
  return es.eigenvectors();
}

double k_trace(const SymBilinearForm& a, int k) {
  if (k < 1 || k > a.dim())
    throw InputError("k_trace: k=" + std::to_string(k) + " outside [1," +
                     std::to_string(a.dim()) + "]");
  const auto ev = eigenvalues_ascending(a);
  double s = 0.0;
  for (int i = 0; i < k; ++i) s += ev[static_cast<std::size_t>(i)];
  return s;
}

std::vector<double> k_trace_profile(const SymBilinearForm& a) {
  auto ev = eigenvalues_ascending(a);
  double s = 0.0;
  for (auto& v : ev) {
    s += v;
    v = s;
  }
  return ev;
}

double trace_on_subspace(const SymBilinearForm& a, const Eigen::MatrixXd& frame) {
  if (frame.rows() != a.dim()) throw InputError("trace_on_subspace: frame dimension mismatch");
  if (frame.cols() < 1 || frame.cols() > a.dim())
    throw InputError("trace_on_subspace: frame must have between 1 and dim vectors");
  const Eigen::MatrixXd gram = frame.transpose() * frame;
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(frame.cols(), frame.cols());
  if ((gram - id).cwiseAbs().maxCoeff() > kOrthonormalTol)
    throw InputError("trace_on_subspace: frame is not orthonormal");
  return (frame.transpose() * a.matrix() * frame).trace();
}

}  // namespace critflow::symform
