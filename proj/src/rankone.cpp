#include "critflow/rankone.hpp"

#include "critflow/error.hpp"
#include "critflow/symform.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <random>

namespace critflow::rankone {

namespace {

void check_delta(double delta) {
  if (!(delta >= 0.0) || !std::isfinite(delta)) throw InputError("delta must be a finite nonnegative number");
}

// Calls f(frame) for each coordinate complex k-plane of C^n, realified.
template <typename F>
void for_each_coordinate_plane(int n, int k, F&& f) {
  std::vector<int> pick(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) pick[static_cast<std::size_t>(i)] = i;
  while (true) {
    Eigen::MatrixXd frame = Eigen::MatrixXd::Zero(2 * n, 2 * k);
    for (int j = 0; j < k; ++j) {
      frame(2 * pick[static_cast<std::size_t>(j)], 2 * j) = 1.0;
      frame(2 * pick[static_cast<std::size_t>(j)] + 1, 2 * j + 1) = 1.0;
    }
    f(frame, pick);
    int i = k - 1;
    while (i >= 0 && pick[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++pick[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
  }
}

}  // namespace

std::string to_string(Family f) {
  switch (f) {
    case Family::Real: return "real";
    case Family::Complex: return "complex";
    case Family::Quaternionic: return "quaternionic";
    case Family::Cayley: return "cayley";
  }
  return "?";
}

Family parse_family(std::string_view s) {
  static const std::map<std::string, Family, std::less<>> names = {
      {"real", Family::Real},
      {"complex", Family::Complex},
      {"quaternionic", Family::Quaternionic},
      {"cayley", Family::Cayley}};
  auto it = names.find(s);
  if (it == names.end()) throw InputError("unknown rank-one family '" + std::string(s) + "'");
  return it->second;
}

RankOneSpace::RankOneSpace(Family family, int n) : family_(family), n_(n) {
  auto fill = [this](int ones, int twos) {
    spectrum_.assign(1, 0.0);
    spectrum_.insert(spectrum_.end(), static_cast<std::size_t>(ones), 1.0);
    spectrum_.insert(spectrum_.end(), static_cast<std::size_t>(twos), 2.0);
  };
  switch (family) {
    case Family::Real:
      if (n < 2) throw InputError("real hyperbolic space needs n >= 2");
      fill(n - 1, 0);
      break;
    case Family::Complex:
      if (n < 2) throw InputError("complex hyperbolic space needs n >= 2");
      fill(2 * n - 2, 1);
      break;
    case Family::Quaternionic:
      if (n < 2) throw InputError("quaternionic hyperbolic space needs n >= 2");
      fill(4 * n - 4, 3);
      break;
    case Family::Cayley:
      n_ = 2;
      fill(8, 7);
      break;
  }
}

double RankOneSpace::max_delta() const {
  switch (family_) {
    case Family::Real: return n_ - 1;
    case Family::Complex: return 2 * n_;
    case Family::Quaternionic: return 4 * n_ + 2;
    case Family::Cayley: return 22;
  }
  return 0;
}

int critical_index(const RankOneSpace& space, double delta) {
  check_delta(delta);
  const auto profile = symform::k_trace_profile(symform::SymBilinearForm::diagonal(space.spectrum()));
  for (std::size_t k = 0; k < profile.size(); ++k)
    if (profile[k] > delta) return static_cast<int>(k) + 1;
  return space.real_dim() + 1;
}

int hd_bound(const RankOneSpace& space, double delta) { return critical_index(space, delta) - 1; }

HdBoundReport hd_bound_report(const RankOneSpace& space, double delta) {
  HdBoundReport r;
  r.critical_index = critical_index(space, delta);
  r.bound = r.critical_index - 1;
  const double top = space.max_delta();
  if (delta > top) r.flags.push_back("delta exceeds the lattice exponent " + std::to_string(static_cast<int>(top)));
  if (space.family() == Family::Quaternionic || space.family() == Family::Cayley) {
    const double gap_lo = space.family() == Family::Cayley ? 16.0 : 4.0 * space.n();
    if (delta > gap_lo && delta < top) r.flags.push_back("excluded by Corlette gap");
    if (delta == gap_lo) r.flags.push_back("edge case not recovered by the k-trace bound");
  }
  return r;
}

HoloTraceReport holo_trace_check(int n, double delta, int k, int num_samples, std::uint64_t seed) {
  if (n < 2) throw InputError("holo_trace_check needs n >= 2");
  if (k < 1 || k > n) throw InputError("holo_trace_check needs 1 <= k <= n");
  if (!(delta >= 0.0) || delta > 2.0 * n) throw InputError("holo_trace_check needs delta in [0, 2n]");
  if (num_samples < 0) throw InputError("num_samples must be nonnegative");

  Eigen::MatrixXd l = Eigen::MatrixXd::Identity(2 * n, 2 * n);
  l(0, 0) = -delta;  // K(e1,e1) = 0 minus delta * H(e1,e1)
  l(1, 1) = 2.0;
  const symform::SymBilinearForm form(l);

  HoloTraceReport rep;
  rep.n = n;
  rep.k = k;
  rep.delta = delta;
  rep.bound = 2.0 * k - delta;
  rep.min_sampled_trace = std::numeric_limits<double>::infinity();
  rep.min_coordinate_trace = std::numeric_limits<double>::infinity();

  for_each_coordinate_plane(n, k, [&](const Eigen::MatrixXd& frame, const std::vector<int>& pick) {
    const double t = symform::trace_on_subspace(form, frame);
    rep.min_coordinate_trace = std::min(rep.min_coordinate_trace, t);
    if (pick.front() == 0) rep.special_plane_trace = t;
    ++rep.planes_checked;
  });
  rep.min_sampled_trace = rep.min_coordinate_trace;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  for (int s = 0; s < num_samples; ++s) {
    Eigen::MatrixXcd g(n, k);
    for (int j = 0; j < k; ++j)
      for (int i = 0; i < n; ++i) g(i, j) = {gauss(rng), gauss(rng)};
    const Eigen::MatrixXcd q = Eigen::HouseholderQR<Eigen::MatrixXcd>(g).householderQ() *
                               Eigen::MatrixXcd::Identity(n, k);
    Eigen::MatrixXd frame(2 * n, 2 * k);
    for (int j = 0; j < k; ++j)
      for (int i = 0; i < n; ++i) {
        const std::complex<double> z = q(i, j);
        frame(2 * i, 2 * j) = z.real();
        frame(2 * i + 1, 2 * j) = z.imag();
        // J applied to the column: multiplication by i.
        frame(2 * i, 2 * j + 1) = -z.imag();
        frame(2 * i + 1, 2 * j + 1) = z.real();
      }
    rep.min_sampled_trace = std::min(rep.min_sampled_trace, symform::trace_on_subspace(form, frame));
    ++rep.planes_checked;
  }
  rep.pass = rep.min_sampled_trace >= rep.bound - 1e-8;
  return rep;
}

double cheeger_lower(int n, double delta) {
  if (n < 2) throw InputError("cheeger_lower needs n >= 2");
  check_delta(delta);
  return std::max(n - 1 - delta, 0.0);
}

Lambda0 sullivan_lambda0(int n, double delta) {
  if (n < 2) throw InputError("sullivan_lambda0 needs n >= 2");
  if (!(delta >= 0.0) || delta > n - 1)
    throw InputError("sullivan_lambda0 needs delta in [0, n-1]");
  const double m = n - 1;
  Lambda0 out;
  out.lambda0 = delta <= m / 2 ? m * m / 4 : delta * (m - delta);
  out.lower_bound = (m - delta) * (m - delta) / 4;
  if (out.lambda0 < out.lower_bound - 1e-12) throw NumericalError("lambda0 below (n-1-delta)^2/4");
  return out;
}

}  // namespace critflow::rankone
