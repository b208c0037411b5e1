#include "critflow/error.hpp"
#include "critflow/rankone.hpp"

#include <doctest.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>

using namespace critflow;
using namespace critflow::rankone;

TEST_CASE("spectra") {
  CHECK(RankOneSpace(Family::Real, 4).spectrum() == std::vector<double>{0, 1, 1, 1});
  CHECK(RankOneSpace(Family::Complex, 2).spectrum() == std::vector<double>{0, 1, 1, 2});
  CHECK(RankOneSpace(Family::Quaternionic, 2).spectrum() == std::vector<double>{0, 1, 1, 1, 1, 2, 2, 2});
  const RankOneSpace cay(Family::Cayley, 2);
  REQUIRE(cay.real_dim() == 16);
  for (int i = 1; i <= 8; ++i) CHECK(cay.spectrum()[i] == 1.0);
  for (int i = 9; i < 16; ++i) CHECK(cay.spectrum()[i] == 2.0);
  CHECK(RankOneSpace(Family::Complex, 5).real_dim() == 10);
  CHECK(RankOneSpace(Family::Quaternionic, 3).real_dim() == 12);
  CHECK_THROWS_AS(parse_family("octonion"), InputError);
}

TEST_CASE("critical index") {
  CHECK(critical_index(RankOneSpace(Family::Real, 4), 1.3) == 3);
  CHECK(critical_index(RankOneSpace(Family::Complex, 2), 2.5) == 4);
  for (int n = 2; n <= 4; ++n) {
    const RankOneSpace q(Family::Quaternionic, n);
    CHECK(critical_index(q, 4.0 * n + 2) == 4 * n + 1);
  }
  CHECK_THROWS_AS(critical_index(RankOneSpace(Family::Real, 3), -0.5), InputError);

  for (auto f : {Family::Real, Family::Complex, Family::Quaternionic, Family::Cayley}) {
    const RankOneSpace s(f, 3);
    int prev = 1;
    for (double d = 0.0; d <= s.max_delta() + 1; d += 0.05) {
      const int j = critical_index(s, d);
      CHECK(j >= prev);
      if (d > 0) CHECK(j >= 2);
      CHECK(j <= s.real_dim() + 1);
      prev = j;
    }
  }
}

TEST_CASE("hd bound examples") {
  CHECK(hd_bound(RankOneSpace(Family::Cayley, 2), 13.0) == 11);
  for (int n = 2; n <= 4; ++n) {
    CHECK(hd_bound(RankOneSpace(Family::Quaternionic, n), 4.0 * n - 3) == 4 * n - 3);
    CHECK(hd_bound(RankOneSpace(Family::Complex, n), 2.0 * n) == 2 * n);
  }
  CHECK_THROWS_AS(hd_bound(RankOneSpace(Family::Real, 3), -1.0), InputError);
}

TEST_CASE("hd bound against the golden tables") {
  std::ifstream in(std::string(CRITFLOW_DATA_DIR) + "/rank1_tables.json");
  REQUIRE(in.good());
  const auto doc = nlohmann::json::parse(in);
  int rows = 0;
  for (const auto& table : doc.at("tables")) {
    const RankOneSpace s(parse_family(table.at("family").get<std::string>()), table.at("n").get<int>());
    for (const auto& row : table.at("rows")) {
      const double d = row.at("delta").get<double>();
      CAPTURE(table.at("name").get<std::string>());
      CAPTURE(d);
      CHECK(hd_bound(s, d) == row.at("hd_bound").get<int>());
      ++rows;
    }
  }
  CHECK(rows > 300);
}

TEST_CASE("hd bound report flags") {
  const RankOneSpace q(Family::Quaternionic, 2);
  const auto inside = hd_bound_report(q, 9.0);
  CHECK(std::find(inside.flags.begin(), inside.flags.end(), "excluded by Corlette gap") != inside.flags.end());
  const auto edge = hd_bound_report(q, 8.0);
  CHECK(edge.flags.size() == 1);
  CHECK(hd_bound_report(q, 3.0).flags.empty());
  const auto cay = hd_bound_report(RankOneSpace(Family::Cayley, 2), 19.0);
  CHECK_FALSE(cay.flags.empty());
  CHECK(hd_bound_report(RankOneSpace(Family::Real, 5), 2.0).flags.empty());
}

TEST_CASE("holomorphic trace check") {
  for (int n = 2; n <= 5; ++n) {
    for (int k = 1; k <= n; ++k) {
      for (double d : {0.0, 1.0, 2.0 * k - 0.5, 2.0 * k}) {
        if (d > 2.0 * n) continue;
        const auto r = holo_trace_check(n, d, k, 10000, 17 + n * 10 + k);
        CAPTURE(n);
        CAPTURE(k);
        CAPTURE(d);
        CHECK(r.pass);
        CHECK(r.bound == doctest::Approx(2 * k - d));
        CHECK(r.min_sampled_trace >= r.bound - 1e-8);
        // The coordinate plane through (e1, J e1) attains the minimum.
        CHECK(r.special_plane_trace == doctest::Approx(2 * k - d).epsilon(1e-12));
        CHECK(r.min_coordinate_trace == doctest::Approx(2 * k - d).epsilon(1e-12));
        if (k == n) CHECK(r.min_sampled_trace == doctest::Approx(2 * n - d).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("cheeger") {
  CHECK(cheeger_lower(3, 0.5) == 1.5);
  CHECK(cheeger_lower(2, 0.0) == 1.0);
  for (int n = 2; n <= 6; ++n) {
    CHECK(cheeger_lower(n, n - 1.0) == 0.0);
    CHECK(cheeger_lower(n, n + 3.0) == 0.0);
  }
}

TEST_CASE("sullivan lambda0") {
  CHECK(sullivan_lambda0(3, 0.5).lambda0 == 1.0);
  CHECK(sullivan_lambda0(3, 1.5).lambda0 == doctest::Approx(0.75).epsilon(1e-15));
  for (int n = 2; n <= 6; ++n) {
    const auto top = sullivan_lambda0(n, n - 1.0);
    CHECK(top.lambda0 == 0.0);
    CHECK(top.lower_bound == 0.0);
    const double half = (n - 1) / 2.0;
    const double below = (n - 1) * (n - 1) / 4.0;
    const double above = half * (n - 1 - half);
    CHECK(std::abs(below - above) <= 1e-12);
    CHECK(std::abs(sullivan_lambda0(n, half).lambda0 - below) <= 1e-12);
    CHECK(std::abs(sullivan_lambda0(n, std::nextafter(half, 1e9)).lambda0 - below) <= 1e-12);
    for (double d = 0.0; d <= n - 1.0; d += 0.01) {
      const auto l = sullivan_lambda0(n, d);
      CHECK(l.lambda0 >= l.lower_bound - 1e-15);
      CHECK(cheeger_lower(n, d) <= 2.0 * std::sqrt(l.lambda0) + 1e-12);
    }
  }
  CHECK_THROWS_AS(sullivan_lambda0(3, -0.1), InputError);
  CHECK_THROWS_AS(sullivan_lambda0(3, 2.1), InputError);
}
