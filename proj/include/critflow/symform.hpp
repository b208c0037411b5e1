#pragma once

// Symmetric bilinear forms on R^n and the k-trace functional
// tr_k(A) = sum of the k smallest eigenvalues
//         = inf { tr(A|_V) : V a k-dimensional subspace }.

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace critflow::symform {

inline constexpr double kOrthonormalTol = 1e-9;

class SymBilinearForm {
 public:
  // Symmetrizes (A + A^T)/2. Throws InputError on empty or non-finite input.
  explicit SymBilinearForm(const Eigen::MatrixXd& entries);

  static SymBilinearForm diagonal(std::span<const double> values);
  static SymBilinearForm identity(int dim);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXd& matrix() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

  double evaluate(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const;
  double trace() const { return m_.trace(); }

  SymBilinearForm operator+(const SymBilinearForm& other) const;
  SymBilinearForm scaled(double c) const;

 private:
  Eigen::MatrixXd m_;
};

// Spectrum in nondecreasing order.
std::vector<double> eigenvalues_ascending(const SymBilinearForm& a);

// Columns of the result are orthonormal eigenvectors, matching
// eigenvalues_ascending() order.
Eigen::MatrixXd eigenvectors_ascending(const SymBilinearForm& a);

double k_trace(const SymBilinearForm& a, int k);

// All partial sums tr_1, ..., tr_dim in one pass.
std::vector<double> k_trace_profile(const SymBilinearForm& a);

// Sum of v_i^T A v_i over the columns of `frame`, which must be orthonormal
// to kOrthonormalTol.
double trace_on_subspace(const SymBilinearForm& a, const Eigen::MatrixXd& frame);

}  // namespace critflow::symform
