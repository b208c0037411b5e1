#pragma once

// Finite boundary densities on H^n, the potential f = -log||mu_x||, its
// gradient and Hessian, and the natural flow with k-frame transport.
//
// A finite atomic measure is not equivariant under any group, but the
// pointwise inequalities checked here (|grad f| <= delta and the k-trace
// bound on Hess f) only use the Busemann spectrum of H^n, so they hold for
// every finite measure and are tested exactly on these stand-ins.

#include "critflow/hypmodel.hpp"
#include "critflow/schottky.hpp"
#include "critflow/symform.hpp"

#include <Eigen/Dense>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace critflow::psflow {

inline constexpr double kMergeAngle = 1e-8;

struct Atom {
  hyp::BoundaryPoint point;
  // log of the mass at the standard basepoint e0.
  double log_weight;
};

class DiscreteBoundaryDensity {
 public:
  // Masses are given at basepoint p; they are converted to the e0 gauge.
  // Atoms whose directions at e0 are within kMergeAngle are merged.
  DiscreteBoundaryDensity(double delta, const std::vector<hyp::BoundaryPoint>& points,
                          const std::vector<double>& log_weights,
                          const std::optional<hyp::MinkPoint>& basepoint = std::nullopt);

  double delta() const { return delta_; }
  int n() const { return n_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  // More than one input atom collapsed into a single atom.
  bool degenerate() const { return degenerate_; }
  int merged_count() const { return merged_; }

  // log of the mass at e0.
  double log_total_weight() const;
  DiscreteBoundaryDensity scaled(double c) const;

  // Atom coordinates as columns, and their log weights, for vectorized use.
  const Eigen::MatrixXd& atom_matrix() const { return bmat_; }
  const Eigen::VectorXd& log_weights() const { return lw_; }

 private:
  DiscreteBoundaryDensity() = default;
  void rebuild_cache();
  double delta_ = 0.0;
  int n_ = 0;
  std::vector<Atom> atoms_;
  bool degenerate_ = false;
  int merged_ = 0;
  Eigen::MatrixXd bmat_;
  Eigen::VectorXd lw_;
};

DiscreteBoundaryDensity density_from_orbit(const std::vector<schottky::OrbitPoint>& orbit, double delta,
                                           const hyp::MinkPoint& basepoint);
// Same construction straight from the word tree, without storing the orbit.
DiscreteBoundaryDensity density_from_group(const schottky::SchottkyGroupSpec& spec, int max_word_len,
                                           double delta, std::uint64_t cap = schottky::kDefaultCap);

double log_norm_mu(const DiscreteBoundaryDensity& mu, const hyp::MinkPoint& x);
double norm_mu(const DiscreteBoundaryDensity& mu, const hyp::MinkPoint& x);
double potential_f(const DiscreteBoundaryDensity& mu, const hyp::MinkPoint& x);
hyp::TangentVec grad_f(const DiscreteBoundaryDensity& mu, const hyp::MinkPoint& x);
symform::SymBilinearForm hess_f(const DiscreteBoundaryDensity& mu, const hyp::MinkPoint& x);
symform::SymBilinearForm hess_f(const DiscreteBoundaryDensity& mu, const hyp::MinkPoint& x,
                                const Eigen::MatrixXd& basis);
// (n+1)x(n+1) matrix H with <Y, H Z> = Hess f(Y, Z) for tangent Y, Z.
Eigen::MatrixXd hess_operator(const DiscreteBoundaryDensity& mu, const hyp::MinkPoint& x);

// Forward: phi_t, x' = grad f. Natural: F_t = phi_{-t}, x' = -grad f.
enum class Sense { Forward, Natural };

struct FlowState {
  hyp::MinkPoint x;
  double t;
  std::vector<hyp::TangentVec> frame;
  // log k-volume of the transported frame from its Gram determinant.
  double log_k_volume;
  // Same quantity from integrating +-tr(Hess f | span frame).
  double log_k_volume_trace;
  double grad_norm;
};

inline constexpr double kDriftTol = 1e-6;

std::vector<FlowState> integrate_flow(const DiscreteBoundaryDensity& mu, const hyp::MinkPoint& x0,
                                      const std::vector<hyp::TangentVec>& frame0, double T, double dt,
                                      Sense sense);

struct ContractionReport {
  double delta = 0.0;
  int k = 0;
  std::vector<double> times;
  std::vector<double> log_k_volume;  // relative to t = 0
  std::vector<double> bound_curve;   // -delta (k-1-delta) t
  std::vector<double> margin;        // bound - log volume, >= -1e-3 t required
  double worst_margin = 0.0;
  // max over the grid of (log volume - bound - 1e-3 t); pass iff <= 0.
  double max_violation = 0.0;
  // max |Gram log volume - trace-integrated log volume| / T.
  double trace_consistency = 0.0;
  double max_grad_norm = 0.0;
  bool pass = false;
};

inline constexpr double kContractionSlack = 1e-3;

ContractionReport verify_contraction(const std::vector<FlowState>& states, const DiscreteBoundaryDensity& mu,
                                     int k);

struct OdeReport {
  double C = 0.0;
  double alpha = 0.0;
  double y0 = 0.0;
  double T = 0.0;
  double coefficient = 0.0;  // y0 - y0^alpha / (C (1 - alpha))
  double min_margin = 0.0;
  std::optional<double> crossing_time;
  bool pass = false;
};

// RK4 on y' = C y - y^alpha with dt = 1e-4, compared with coefficient * e^{Ct}.
OdeReport verify_ode_bound(double C, double alpha, double y0, double T);

struct GrowthProfile {
  std::vector<double> distance;  // d(x, e0) along the ray
  std::vector<double> log_norm;
  double rate = 0.0;             // least-squares slope of log_norm against distance
};

GrowthProfile norm_growth_profile(const DiscreteBoundaryDensity& mu, const hyp::MinkPoint& x0,
                                  const hyp::TangentVec& v, double T, int samples);

// CSV with columns t, x0..xn, log_k_volume, bound_curve, margin.
void write_trajectory_csv(std::ostream& os, const std::vector<FlowState>& states, const ContractionReport& report);

}  // namespace critflow::psflow
