#include "critflow/error.hpp"
#include "critflow/schottky.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <map>
#include <numbers>

using namespace critflow;
using namespace critflow::schottky;

namespace {

bool reduced(const std::string& w) {
  for (std::size_t i = 1; i < w.size(); ++i)
    if (w[i] != w[i - 1] && std::tolower(w[i]) == std::tolower(w[i - 1])) return false;
  return true;
}

std::string inverse_word(std::string w) {
  std::reverse(w.begin(), w.end());
  for (auto& c : w) c = std::islower(c) ? static_cast<char>(std::toupper(c)) : static_cast<char>(std::tolower(c));
  return w;
}

}  // namespace

TEST_CASE("reduced word counts") {
  for (int m = 1; m <= 3; ++m) {
    for (int L = 1; L <= 6; ++L) {
      const auto orbit = enumerate_orbit(make_symmetric_schottky(3, m, 3.0), L);
      std::map<std::size_t, long> by_len;
      for (const auto& o : orbit) {
        ++by_len[o.word.size()];
        CHECK(reduced(o.word));
      }
      std::uint64_t total = 0;
      for (int l = 1; l <= L; ++l) {
        const long want = static_cast<long>(2 * m * std::pow(2 * m - 1, l - 1));
        CHECK(by_len[l] == want);
        total += want;
      }
      CHECK(orbit.size() == total);
      CHECK(reduced_word_count(m, L) == total);
    }
  }
}

TEST_CASE("cyclic group along its axis") {
  for (double t : {0.5, 1.0, 2.5}) {
    const auto orbit = enumerate_orbit(make_cyclic(2, t), 30);
    REQUIRE(orbit.size() == 60);
    for (const auto& o : orbit) CHECK(std::abs(o.dist - o.word.size() * t) <= 1e-9);
  }
  const auto e = estimate_delta(make_cyclic(3, 2.0), 40);
  CHECK(e.value <= 0.05);
  CHECK(e.value >= 0.0);
  CHECK(e.point_count >= 50);
}

TEST_CASE("orbit points") {
  const auto spec = make_random_schottky(3, 2, 4.0, 7.0, std::numbers::pi / 3, 5);
  const auto orbit = enumerate_orbit(spec, 6);
  std::map<std::string, double> dist;
  const auto p = spec.basepoint();
  for (const auto& o : orbit) {
    dist[o.word] = o.dist;
    CHECK(o.dist > 0.0);
    CHECK(std::abs(o.dist - hyp::distance(p, o.point)) <= 1e-9);
    const Eigen::VectorXd w = word_matrix(spec, o.word) * p.coords();
    CHECK((w - o.point.coords()).norm() <= 1e-9 * w(0));
  }
  for (const auto& [w, d] : dist) CHECK(std::abs(d - dist.at(inverse_word(w))) <= 1e-9 * std::max(1.0, d));
  CHECK_THROWS_AS(word_matrix(spec, "aA"), InputError);
  CHECK_THROWS_AS(word_matrix(spec, "ac"), InputError);
}

TEST_CASE("generators and fixtures") {
  const auto spec = make_symmetric_schottky(3, 2, 4.0);
  CHECK(spec.num_generators() == 2);
  for (int i = 0; i < 2; ++i) {
    const Eigen::MatrixXd id = spec.generators()[i].matrix() * spec.inverses()[i].matrix();
    CHECK((id - Eigen::MatrixXd::Identity(4, 4)).norm() <= 1e-9);
  }
  CHECK_THROWS_AS(make_symmetric_schottky(2, 3, 4.0), InputError);
  CHECK_THROWS_AS(make_cyclic(2, 0.0), InputError);
  const auto r1 = make_random_schottky(3, 3, 4.0, 7.0, std::numbers::pi / 4, 9);
  const auto r2 = make_random_schottky(3, 3, 4.0, 7.0, std::numbers::pi / 4, 9);
  for (int i = 0; i < 3; ++i) CHECK(r1.generators()[i].matrix() == r2.generators()[i].matrix());
}

TEST_CASE("poincare partial sums") {
  const std::vector<double> one{2.0};
  CHECK(poincare_partial_sum(one, 0.7) == doctest::Approx(std::exp(-1.4)).epsilon(1e-15));
  const auto d = orbit_distances(make_symmetric_schottky(2, 2, 3.0), 6);
  CHECK(poincare_partial_sum(d, 0.0) == doctest::Approx(static_cast<double>(d.size())));
  double prev = poincare_partial_sum(d, 0.0);
  for (double s = 0.1; s < 3.0; s += 0.1) {
    const double cur = poincare_partial_sum(d, s);
    CHECK(cur < prev);
    prev = cur;
  }
  CHECK_THROWS_AS(poincare_partial_sum(std::vector<double>{}, 1.0), InputError);
  CHECK_THROWS_AS(poincare_partial_sum(d, -1.0), InputError);
}

TEST_CASE("estimate on the symmetric fixtures") {
  // Each axis switch costs about log 2 of displacement, so the estimate sits
  // between log 3 / ell and log 3 / (ell - 1).
  std::map<double, double> est;
  for (double ell : {4.0, 6.0, 8.0, 12.0}) {
    const auto e = estimate_delta(make_symmetric_schottky(2, 2, ell), 12);
    est[ell] = e.value;
    CHECK(e.point_count >= 50);
    CHECK(e.window_min == doctest::Approx(0.2 * e.window_max / 0.9));
    CHECK(e.fit_residual >= 0.0);
    CAPTURE(ell);
    CHECK(std::abs(e.value / (std::log(3.0) / ell) - 1.0) <= 0.15);
  }
  CHECK(std::abs(est[8.0] / est[4.0] - 0.5) <= 0.2 * 0.5);
  CHECK(std::abs(est[12.0] / est[6.0] - 0.5) <= 0.2 * 0.5);
}

TEST_CASE("refinement stays inside the residual band") {
  std::vector<SchottkyGroupSpec> fixtures{make_symmetric_schottky(2, 2, 4.0), make_symmetric_schottky(3, 2, 3.0),
                                          make_random_schottky(3, 2, 4.0, 7.0, std::numbers::pi / 3, 1)};
  for (const auto& spec : fixtures) {
    for (int L : {8, 10}) {
      const auto a = estimate_delta(spec, L);
      const auto b = estimate_delta(spec, L + 2);
      CAPTURE(spec.label());
      CAPTURE(L);
      CHECK(std::abs(b.value - a.value) < a.fit_residual);
    }
  }
}

TEST_CASE("poincare bracket around the estimate") {
  // s = estimate - 0.5 must stay nonnegative, so short translation lengths.
  for (double ell : {2.0, 2.5}) {
    const auto spec = make_symmetric_schottky(2, 2, ell);
    const double est = estimate_delta(spec, 12).value;
    REQUIRE(est - 0.5 >= 0.0);
    std::vector<double> above, below;
    for (int L : {8, 10, 12}) {
      const auto d = orbit_distances(spec, L);
      above.push_back(poincare_partial_sum(d, est + 0.5));
      below.push_back(poincare_partial_sum(d, est - 0.5));
    }
    CAPTURE(ell);
    for (int i = 1; i < 3; ++i) {
      CHECK(above[i] / above[i - 1] - 1.0 < 0.05);
      CHECK(below[i] / below[i - 1] >= 1.5);
    }
  }
}

TEST_CASE("estimate errors") {
  CHECK_THROWS_AS(estimate_delta(make_cyclic(2, 1.0), 10), EstimateError);
  CHECK_THROWS_AS(estimate_delta_from_distances(std::vector<double>(10, 1.0)), EstimateError);
}

TEST_CASE("cap") {
  const auto spec = make_symmetric_schottky(2, 2, 4.0);
  try {
    enumerate_orbit(spec, 8, 1000);
    FAIL("expected a resource error");
  } catch (const ResourceError& e) {
    CHECK(e.required() == reduced_word_count(2, 8));
  }
  CHECK(enumerate_orbit(spec, 5, reduced_word_count(2, 5)).size() == reduced_word_count(2, 5));
  CHECK_THROWS_AS(enumerate_orbit(spec, 0), InputError);

  ::setenv("CRITFLOW_CAP", "123", 1);
  CHECK(cap_from_env() == 123);
  ::setenv("CRITFLOW_CAP", "junk", 1);
  CHECK_THROWS_AS(cap_from_env(), InputError);
  ::unsetenv("CRITFLOW_CAP");
  CHECK(cap_from_env() == kDefaultCap);
}
