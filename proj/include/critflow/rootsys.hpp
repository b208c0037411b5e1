#pragma once

// Restricted root systems with multiplicities and the covectors built from
// them: rho (half sum of positive roots), Theta (half sum of a maximal
// strongly orthogonal system), the highest root, the gap integer s(eta),
// the Busemann spectrum L_u and the higher-rank bounds l_X and n - s(eta).
//
// Covectors are stored in the same Euclidean coordinates as chamber
// vectors, so a root alpha evaluates on u as alpha.dot(u).

#include "critflow/symform.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace critflow::rootsys {

enum class RootType { A, B, C, D, E6, E7, E8, F4, G2, BC };

std::string to_string(RootType t);
RootType parse_root_type(std::string_view s);

struct Component {
  RootType type;
  int rank;
};

struct PositiveRoot {
  Eigen::VectorXd coords;
  int mult = 1;
  int component = 0;
};

class RestrictedRootSystem {
 public:
  // Validates every invariant: roots nonnegative on the chamber generators,
  // classical positive-root count per component, and exactly `rank`
  // indecomposable roots. Throws InputError otherwise.
  RestrictedRootSystem(std::vector<Component> components, int coord_dim,
                       std::vector<PositiveRoot> roots,
                       std::vector<Eigen::VectorXd> chamber_generators);

  const std::vector<Component>& components() const { return components_; }
  int rank() const { return rank_; }
  int coord_dim() const { return coord_dim_; }
  bool irreducible() const { return components_.size() == 1; }

  const std::vector<PositiveRoot>& positive_roots() const { return roots_; }
  const std::vector<Eigen::VectorXd>& chamber_generators() const { return generators_; }
  // Indices into positive_roots().
  const std::vector<int>& simple_roots() const { return simple_; }

  int total_multiplicity() const;

  // eta(omega_i) for each chamber generator omega_i; for the fundamental
  // coweights these are the simple-root coefficients of eta.
  Eigen::VectorXd chamber_values(const Eigen::VectorXd& covector) const;
  double height(const Eigen::VectorXd& covector) const { return chamber_values(covector).sum(); }

  // True when v equals +-alpha for some root alpha.
  bool is_root(const Eigen::VectorXd& v) const;

  // Orthogonal projection onto the span of the roots.
  Eigen::VectorXd project_to_span(const Eigen::VectorXd& v) const;

  RestrictedRootSystem with_multiplicities(const std::vector<int>& mults) const;
  RestrictedRootSystem with_uniform_multiplicity(int mult) const;

 private:
  std::vector<Component> components_;
  int coord_dim_;
  int rank_ = 0;
  std::vector<PositiveRoot> roots_;
  std::vector<Eigen::VectorXd> generators_;
  std::vector<int> simple_;
  Eigen::MatrixXd span_basis_;  // orthonormal columns
};

// Standard coordinate model. A_1 is realized on R^1 with root value 1 at the
// unit chamber vector; A_r (r >= 2) on the trace-zero subspace of R^{r+1}.
RestrictedRootSystem build_root_system(RootType type, int rank);

RestrictedRootSystem direct_sum(const std::vector<RestrictedRootSystem>& parts);

// Classical number of positive roots, ignoring multiplicity.
int classical_positive_count(RootType type, int rank);

struct SymmetricSpacePreset {
  std::string name;
  RestrictedRootSystem roots;

  int rank() const { return roots.rank(); }
  int dim() const { return roots.rank() + roots.total_multiplicity(); }
};

// SL(N,R)/SO(N): split A_{N-1}, n = r(r+3)/2.
SymmetricSpacePreset sl_preset(int N);
// Split real form of the given type: every multiplicity 1.
SymmetricSpacePreset split_preset(RootType type, int rank);
// H^{n1} x H^{n2}: A_1 x A_1 with multiplicities n1-1, n2-1.
SymmetricSpacePreset product_hyperbolic_preset(int n1, int n2);
// H^n_R as a rank-one system: A_1 with multiplicity n-1.
SymmetricSpacePreset real_hyperbolic_preset(int n);

// Parses "sl:N", "split:B5", "product:n1,n2", "real:n".
SymmetricSpacePreset preset_from_name(std::string_view name);

Eigen::VectorXd rho(const SymmetricSpacePreset& preset);
Eigen::VectorXd rho(const RestrictedRootSystem& rs);

Eigen::VectorXd highest_root(const RestrictedRootSystem& rs);

struct StronglyOrthogonalSystem {
  std::vector<Eigen::VectorXd> roots;
  Eigen::VectorXd theta;
};

// Greedy cascade: take the highest remaining root, discard every root not
// strongly orthogonal to it, repeat. Theta is half the sum of the picks.
StronglyOrthogonalSystem strongly_orthogonal_theta(const RestrictedRootSystem& rs);

// Largest s >= 0 with eta - s*l nonnegative on every chamber generator and
// not identically zero.
int s_eta(const RestrictedRootSystem& rs, const Eigen::VectorXd& eta);

// Diagonal form (0^r, alpha(u) repeated by multiplicity), ascending.
symform::SymBilinearForm busemann_spectrum(const SymmetricSpacePreset& preset,
                                           const Eigen::VectorXd& u);

// min{k : tr_k(L_u) > delta}, or n+1.
int l_X(const SymmetricSpacePreset& preset, const Eigen::VectorXd& u, double delta);

// n - s(eta).
int gap_bound(const SymmetricSpacePreset& preset, const Eigen::VectorXd& eta);

}  // namespace critflow::rootsys
