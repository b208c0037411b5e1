#include "critflow/schottky.hpp"

#include "critflow/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <random>

namespace critflow::schottky {

namespace {

constexpr int kGridPoints = 200;
constexpr double kWindowLo = 0.2;
constexpr double kWindowHi = 0.9;
constexpr long kMinPoints = 50;

char letter_char(int l) { return l % 2 == 0 ? static_cast<char>('a' + l / 2) : static_cast<char>('A' + l / 2); }

int letter_index(char c, int m) {
  int l = -1;
  if (c >= 'a' && c <= 'z') l = 2 * (c - 'a');
  if (c >= 'A' && c <= 'Z') l = 2 * (c - 'A') + 1;
  if (l < 0 || l / 2 >= m) throw InputError(std::string("unknown generator letter '") + c + "'");
  return l;
}

int inverse_letter(int l) { return l ^ 1; }

Eigen::VectorXd unit_axis(int n, int i) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  v(i) = 1.0;
  return v;
}

SchottkyGroupSpec boosts_with_lengths(const std::vector<Eigen::VectorXd>& directions,
                                      const std::vector<double>& lengths, std::string label) {
  if (directions.empty()) throw InputError("a Schottky group needs at least one generator");
  std::vector<hyp::Isometry> gens;
  for (std::size_t i = 0; i < directions.size(); ++i) {
    if (!(lengths[i] > 0.0)) throw InputError("translation length must be positive");
    gens.push_back(hyp::Isometry::boost(directions[i], lengths[i]));
  }
  const int n = static_cast<int>(directions.front().size());
  return SchottkyGroupSpec(std::move(gens), hyp::MinkPoint::basepoint(n), std::move(label));
}

}  // namespace

SchottkyGroupSpec::SchottkyGroupSpec(std::vector<hyp::Isometry> generators, hyp::MinkPoint basepoint,
                                     std::string label, bool free_asserted)
    : generators_(std::move(generators)),
      basepoint_(std::move(basepoint)),
      label_(std::move(label)),
      free_asserted_(free_asserted) {
  if (generators_.empty()) throw InputError("a Schottky group needs at least one generator");
  if (generators_.size() > 26) throw InputError("at most 26 generators are supported");
  for (const auto& g : generators_) {
    if (g.n() != basepoint_.n()) throw InputError("generator dimension does not match the basepoint");
    inverses_.push_back(g.inverse());
  }
}

const hyp::Isometry& SchottkyGroupSpec::letter(int l) const {
  const auto i = static_cast<std::size_t>(l / 2);
  return l % 2 == 0 ? generators_.at(i) : inverses_.at(i);
}

std::uint64_t reduced_word_count(int m, int L) {
  if (m < 1 || L < 1) throw InputError("reduced_word_count needs m >= 1 and L >= 1");
  const long double branch = 2.0L * m - 1.0L;
  long double level = 2.0L * m;
  long double total = 0.0L;
  for (int l = 1; l <= L; ++l) {
    total += level;
    if (total > static_cast<long double>(std::numeric_limits<std::uint64_t>::max() / 2))
      return std::numeric_limits<std::uint64_t>::max();
    level *= branch;
  }
  return static_cast<std::uint64_t>(total);
}

std::uint64_t cap_from_env() {
  const char* env = std::getenv("CRITFLOW_CAP");
  if (env == nullptr || *env == '\0') return kDefaultCap;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0' || v == 0) throw InputError("CRITFLOW_CAP must be a positive integer");
  return v;
}

void for_each_orbit_point(
    const SchottkyGroupSpec& spec, int max_word_len, std::uint64_t cap,
    const std::function<void(const std::string&, const Eigen::VectorXd&, double)>& visit) {
  if (max_word_len < 1) throw InputError("max_word_len must be at least 1");
  const int m = spec.num_generators();
  const std::uint64_t need = reduced_word_count(m, max_word_len);
  if (need > cap)
    throw ResourceError("orbit enumeration needs " + std::to_string(need) + " words, cap is " + std::to_string(cap),
                        need);

  const Eigen::VectorXd& p = spec.basepoint().coords();
  const int letters = 2 * m;
  // Stack of partial products; stack[d] is the word of length d.
  std::vector<Eigen::MatrixXd> stack(static_cast<std::size_t>(max_word_len) + 1);
  stack[0] = Eigen::MatrixXd::Identity(p.size(), p.size());
  std::string word;
  std::vector<int> next(static_cast<std::size_t>(max_word_len) + 1, 0);
  std::vector<int> used(static_cast<std::size_t>(max_word_len) + 1, -1);

  int depth = 0;
  while (depth >= 0) {
    const auto d = static_cast<std::size_t>(depth);
    if (depth == max_word_len || next[d] >= letters) {
      --depth;
      if (!word.empty()) word.pop_back();
      continue;
    }
    const int l = next[d]++;
    if (depth > 0 && l == inverse_letter(used[d])) continue;
    stack[d + 1] = stack[d] * spec.letter(l).matrix();
    used[d + 1] = l;
    next[d + 1] = 0;
    word.push_back(letter_char(l));
    const Eigen::VectorXd x = stack[d + 1] * p;
    const double dist = std::acosh(std::max(-hyp::minkowski(p, x), 1.0));
    visit(word, x, dist);
    ++depth;
  }
}

std::vector<OrbitPoint> enumerate_orbit(const SchottkyGroupSpec& spec, int max_word_len, std::uint64_t cap) {
  std::vector<OrbitPoint> out;
  for_each_orbit_point(spec, max_word_len, cap, [&](const std::string& w, const Eigen::VectorXd& x, double) {
    hyp::MinkPoint pt(x);
    const double dist = hyp::distance(spec.basepoint(), pt);
    out.push_back(OrbitPoint{w, std::move(pt), dist});
  });
  return out;
}

std::vector<double> orbit_distances(const SchottkyGroupSpec& spec, int max_word_len, std::uint64_t cap) {
  std::vector<double> out;
  for_each_orbit_point(spec, max_word_len, cap,
                       [&](const std::string&, const Eigen::VectorXd&, double d) { out.push_back(d); });
  return out;
}

double poincare_partial_sum(const std::vector<double>& dists, double s) {
  if (dists.empty()) throw InputError("poincare_partial_sum needs a nonempty orbit");
  if (!(s >= 0.0)) throw InputError("exponent s must be nonnegative");
  double sum = 0.0;
  for (double d : dists) sum += std::exp(-s * d);
  return sum;
}

double poincare_partial_sum(const std::vector<OrbitPoint>& orbit, double s) {
  std::vector<double> d;
  d.reserve(orbit.size());
  for (const auto& o : orbit) d.push_back(o.dist);
  return poincare_partial_sum(d, s);
}

DeltaEstimate estimate_delta_from_distances(std::vector<double> dists) {
  if (dists.empty()) throw EstimateError("empty orbit");
  std::sort(dists.begin(), dists.end());
  const double r_max = dists.back();
  DeltaEstimate est;
  est.window_min = kWindowLo * r_max;
  est.window_max = kWindowHi * r_max;
  auto count_upto = [&](double r) {
    return static_cast<long>(std::upper_bound(dists.begin(), dists.end(), r) - dists.begin());
  };
  est.point_count = count_upto(est.window_max);
  if (est.point_count < kMinPoints)
    throw EstimateError("only " + std::to_string(est.point_count) + " orbit points inside the fit window (need " +
                        std::to_string(kMinPoints) + ")");

  std::vector<double> rs, ys;
  for (int i = 0; i < kGridPoints; ++i) {
    const double r = est.window_min + (est.window_max - est.window_min) * i / (kGridPoints - 1);
    const long c = count_upto(r);
    if (c == 0) continue;
    rs.push_back(r);
    ys.push_back(std::log(static_cast<double>(c)));
  }
  if (rs.size() < 2) throw EstimateError("fit window holds fewer than two nonempty grid points");

  const auto k = static_cast<double>(rs.size());
  double mr = 0, my = 0;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    mr += rs[i];
    my += ys[i];
  }
  mr /= k;
  my /= k;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    sxx += (rs[i] - mr) * (rs[i] - mr);
    sxy += (rs[i] - mr) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw EstimateError("degenerate fit window");
  const double slope = sxy / sxx;
  double ss = 0;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    const double e = ys[i] - (my + slope * (rs[i] - mr));
    ss += e * e;
  }
  est.fit_residual = std::sqrt(ss / k);
  est.value = std::max(slope, 0.0);
  return est;
}

DeltaEstimate estimate_delta(const SchottkyGroupSpec& spec, int max_word_len, std::uint64_t cap) {
  return estimate_delta_from_distances(orbit_distances(spec, max_word_len, cap));
}

Eigen::MatrixXd word_matrix(const SchottkyGroupSpec& spec, const std::string& word) {
  const int m = spec.num_generators();
  const long dim = spec.basepoint().coords().size();
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(dim, dim);
  int prev = -1;
  for (char c : word) {
    const int l = letter_index(c, m);
    if (prev >= 0 && l == inverse_letter(prev)) throw InputError("word '" + word + "' is not reduced");
    out = out * spec.letter(l).matrix();
    prev = l;
  }
  return out;
}

SchottkyGroupSpec make_boost_schottky(const std::vector<Eigen::VectorXd>& directions, double ell,
                                      std::string label) {
  return boosts_with_lengths(directions, std::vector<double>(directions.size(), ell), std::move(label));
}

SchottkyGroupSpec make_symmetric_schottky(int n, int m, double ell) {
  if (n < 2 || m < 1 || m > n) throw InputError("symmetric Schottky fixture needs n >= 2 and 1 <= m <= n");
  std::vector<Eigen::VectorXd> dirs;
  for (int i = 0; i < m; ++i) dirs.push_back(unit_axis(n, i));
  return make_boost_schottky(dirs, ell, "symmetric-H" + std::to_string(n) + "-m" + std::to_string(m));
}

SchottkyGroupSpec make_cyclic(int n, double t) {
  if (n < 2) throw InputError("cyclic fixture needs n >= 2");
  return make_boost_schottky({unit_axis(n, 0)}, t, "cyclic-H" + std::to_string(n));
}

SchottkyGroupSpec make_random_schottky(int n, int m, double ell_lo, double ell_hi, double min_angle,
                                       std::uint64_t seed) {
  if (n < 2 || m < 1) throw InputError("random Schottky fixture needs n >= 2 and m >= 1");
  if (!(ell_lo > 0.0) || ell_hi < ell_lo) throw InputError("need 0 < ell_lo <= ell_hi");
  if (!(min_angle >= 0.0) || min_angle > std::numbers::pi / 2)
    throw InputError("min_angle must lie in [0, pi/2]");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif(ell_lo, ell_hi);
  std::vector<Eigen::VectorXd> dirs;
  std::vector<double> lengths;
  const double max_cos = std::cos(min_angle);
  int attempts = 0;
  while (static_cast<int>(dirs.size()) < m) {
    if (++attempts > 100000) throw InputError("could not place generator axes with the requested separation");
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = gauss(rng);
    if (v.norm() < 1e-6) continue;
    v.normalize();
    // Axes are lines, so both v and -v count.
    bool ok = true;
    for (const auto& w : dirs) ok = ok && std::abs(v.dot(w)) <= max_cos;
    if (!ok) continue;
    dirs.push_back(v);
    lengths.push_back(unif(rng));
  }
  return boosts_with_lengths(dirs, lengths, "random-H" + std::to_string(n) + "-seed" + std::to_string(seed));
}

}  // namespace critflow::schottky
