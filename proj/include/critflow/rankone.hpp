#pragma once

// Rank-one symmetric spaces: critical index, homological-dimension bound
// tables, the holomorphic k-plane trace inequality, and the Cheeger and
// bottom-of-spectrum bounds in terms of the critical exponent delta.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace critflow::rankone {

enum class Family { Real, Complex, Quaternionic, Cayley };

std::string to_string(Family f);
Family parse_family(std::string_view s);

class RankOneSpace {
 public:
  // n is ignored for Cayley (always the octonionic plane, real dim 16).
  RankOneSpace(Family family, int n);

  Family family() const { return family_; }
  int n() const { return n_; }
  int real_dim() const { return static_cast<int>(spectrum_.size()); }
  // Busemann Hessian eigenvalues, ascending: Real (0,1^{n-1}),
  // Complex (0,1^{2n-2},2), Quaternionic (0,1^{4n-4},2^3), Cayley (0,1^8,2^7).
  const std::vector<double>& spectrum() const { return spectrum_; }
  // Largest critical exponent a discrete subgroup can have (lattices).
  double max_delta() const;

 private:
  Family family_;
  int n_;
  std::vector<double> spectrum_;
};

int critical_index(const RankOneSpace& space, double delta);

int hd_bound(const RankOneSpace& space, double delta);

struct HdBoundReport {
  int bound = 0;
  int critical_index = 0;
  // Annotations such as "excluded by Corlette gap" or "edge case not recovered".
  std::vector<std::string> flags;
};

HdBoundReport hd_bound_report(const RankOneSpace& space, double delta);

struct HoloTraceReport {
  int n = 0;
  int k = 0;
  double delta = 0.0;
  double min_sampled_trace = 0.0;
  double bound = 0.0;  // 2k - delta
  // Trace on the coordinate complex plane through (e1, J e1).
  double special_plane_trace = 0.0;
  double min_coordinate_trace = 0.0;
  int planes_checked = 0;
  bool pass = false;
};

// Traces of L = K - delta*H over J-invariant real 2k-planes of R^{2n},
// with K = diag(0, 2, 1, ..., 1) and H = e1 e1^T.
HoloTraceReport holo_trace_check(int n, double delta, int k, int num_samples, std::uint64_t seed);

double cheeger_lower(int n, double delta);

struct Lambda0 {
  double lambda0;
  double lower_bound;  // (n-1-delta)^2 / 4
};

Lambda0 sullivan_lambda0(int n, double delta);

}  // namespace critflow::rankone
