#pragma once

// Free groups of hyperboloid isometries: reduced-word orbit enumeration,
// partial Poincare series and orbit-growth estimates of the critical exponent.
//
// Words use 'a','b',... for generators and 'A','B',... for their inverses.

#include "critflow/hypmodel.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace critflow::schottky {

inline constexpr std::uint64_t kDefaultCap = 10'000'000;

class SchottkyGroupSpec {
 public:
  // Generators are validated as Lorentz isometries; freeness is taken on trust.
  SchottkyGroupSpec(std::vector<hyp::Isometry> generators, hyp::MinkPoint basepoint, std::string label,
                    bool free_asserted = true);

  int num_generators() const { return static_cast<int>(generators_.size()); }
  int n() const { return basepoint_.n(); }
  const std::vector<hyp::Isometry>& generators() const { return generators_; }
  const std::vector<hyp::Isometry>& inverses() const { return inverses_; }
  const hyp::MinkPoint& basepoint() const { return basepoint_; }
  const std::string& label() const { return label_; }
  bool free_asserted() const { return free_asserted_; }

  // Letter 0..2m-1: even = generator i/2, odd = its inverse.
  const hyp::Isometry& letter(int l) const;

 private:
  std::vector<hyp::Isometry> generators_;
  std::vector<hyp::Isometry> inverses_;
  hyp::MinkPoint basepoint_;
  std::string label_;
  bool free_asserted_;
};

struct OrbitPoint {
  std::string word;
  hyp::MinkPoint point;
  double dist;
};

struct DeltaEstimate {
  double value = 0.0;
  double window_min = 0.0;
  double window_max = 0.0;
  long point_count = 0;
  double fit_residual = 0.0;
};

// Number of reduced words of length 1..L in the free group on m letters.
std::uint64_t reduced_word_count(int m, int L);

// Reads CRITFLOW_CAP if set to a positive integer, else kDefaultCap.
std::uint64_t cap_from_env();

// Depth-first walk over every reduced word of length 1..L. The visitor gets
// the word, the image of the basepoint and its distance from the basepoint.
// Throws ResourceError when the word count exceeds cap.
void for_each_orbit_point(
    const SchottkyGroupSpec& spec, int max_word_len, std::uint64_t cap,
    const std::function<void(const std::string&, const Eigen::VectorXd&, double)>& visit);

std::vector<OrbitPoint> enumerate_orbit(const SchottkyGroupSpec& spec, int max_word_len,
                                        std::uint64_t cap = kDefaultCap);

// Orbit distances only, in enumeration order.
std::vector<double> orbit_distances(const SchottkyGroupSpec& spec, int max_word_len,
                                    std::uint64_t cap = kDefaultCap);

double poincare_partial_sum(const std::vector<OrbitPoint>& orbit, double s);
double poincare_partial_sum(const std::vector<double>& dists, double s);

// Slope of log N(R) over R in [0.2, 0.9] * max distance, on a 200-point grid.
DeltaEstimate estimate_delta_from_distances(std::vector<double> dists);
DeltaEstimate estimate_delta(const SchottkyGroupSpec& spec, int max_word_len, std::uint64_t cap = kDefaultCap);

// Word applied to the basepoint, e.g. "abA".
Eigen::MatrixXd word_matrix(const SchottkyGroupSpec& spec, const std::string& word);

// Boosts of length ell along the geodesics through p with the given unit
// directions in R^n; one generator per direction.
SchottkyGroupSpec make_boost_schottky(const std::vector<Eigen::VectorXd>& directions, double ell,
                                      std::string label);

// Generators along the first m coordinate axes of H^n (mutually perpendicular).
SchottkyGroupSpec make_symmetric_schottky(int n, int m, double ell);

// <g> with g the boost of length t along e1; basepoint on the axis.
SchottkyGroupSpec make_cyclic(int n, double t);

// m boosts in H^n through p along random directions whose pairwise angles
// are at least min_angle, lengths uniform in [ell_lo, ell_hi].
SchottkyGroupSpec make_random_schottky(int n, int m, double ell_lo, double ell_hi, double min_angle,
                                       std::uint64_t seed);

}  // namespace critflow::schottky
