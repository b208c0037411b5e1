#include "critflow/error.hpp"
#include "critflow/json_io.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace critflow;
using namespace critflow::json_io;

TEST_CASE("vectors and matrices") {
  Eigen::VectorXd v(3);
  v << 1.5, -2, 0.125;
  CHECK(vector_from_json(vector_to_json(v), "v") == v);
  Eigen::MatrixXd m(2, 3);
  m << 1, 2, 3, 4, 5, 6;
  CHECK(matrix_to_json(m) == json::parse("[[1,2,3],[4,5,6]]"));
  CHECK(matrix_from_json(matrix_to_json(m), "m") == m);
  CHECK_THROWS_AS(matrix_from_json(json::parse("[[1,2],[3]]"), "m"), InputError);
  CHECK_THROWS_AS(vector_from_json(json::parse("[1,\"x\"]"), "v"), InputError);
  CHECK_THROWS_AS(vector_from_json(json::parse("{}"), "v"), InputError);
}

TEST_CASE("root systems") {
  for (const char* name : {"sl:4", "split:G2", "product:3,5", "split:E6"}) {
    const auto pre = rootsys::preset_from_name(name);
    const auto back = root_system_from_json(json::parse(root_system_to_json(pre.roots).dump()));
    CHECK(back.rank() == pre.roots.rank());
    CHECK(back.total_multiplicity() == pre.roots.total_multiplicity());
    CHECK((rootsys::rho(back) - rootsys::rho(pre.roots)).norm() <= 1e-15);
  }
}

TEST_CASE("group specs") {
  const auto spec = schottky::make_random_schottky(3, 2, 4.0, 7.0, std::numbers::pi / 3, 4);
  const auto back = group_spec_from_json(json::parse(group_spec_to_json(spec).dump()));
  CHECK(back.label() == spec.label());
  CHECK(back.num_generators() == 2);
  for (int i = 0; i < 2; ++i) CHECK(back.generators()[i].matrix() == spec.generators()[i].matrix());
  CHECK(back.basepoint().coords() == spec.basepoint().coords());
  CHECK(schottky::orbit_distances(back, 5) == schottky::orbit_distances(spec, 5));

  auto bad = group_spec_to_json(spec);
  bad["generators"][0][0][0] = 3.0;
  CHECK_THROWS_AS(group_spec_from_json(bad), InputError);
  CHECK_THROWS_AS(group_spec_from_json(json::parse("{\"basepoint\":[1,0,0]}")), InputError);
}

TEST_CASE("densities") {
  support::Rng rng(3);
  const auto mu = support::random_density(rng, 3, 20, 0.8);
  const auto back = density_from_json(json::parse(density_to_json(mu).dump()));
  REQUIRE(back.atoms().size() == mu.atoms().size());
  CHECK(back.delta() == mu.delta());
  const auto x = support::random_point(rng, 3, 1.0);
  CHECK(psflow::log_norm_mu(back, x) == doctest::Approx(psflow::log_norm_mu(mu, x)).epsilon(1e-14));

  const auto plain = density_from_json(json::parse(
      R"({"delta": 0.5, "atoms": [{"point": [1, 1, 0, 0], "weight": 2.0}, {"point": [1, -1, 0, 0], "log_weight": 0.0}]})"));
  CHECK(plain.atoms().size() == 2);
  CHECK(std::exp(plain.log_total_weight()) == doctest::Approx(3.0));
  CHECK_THROWS_AS(density_from_json(json::parse(R"({"delta": 0.5, "atoms": [{"point": [1, 1, 0, 0], "weight": -1}]})")),
                  InputError);
  CHECK_THROWS_AS(density_from_json(json::parse(R"({"delta": 0.5, "atoms": [{"point": [1, 2, 0, 0], "weight": 1}]})")),
                  InputError);
}

TEST_CASE("reports") {
  schottky::DeltaEstimate e;
  e.value = 0.25;
  e.window_min = 1;
  e.window_max = 4.5;
  e.point_count = 77;
  e.fit_residual = 0.01;
  const auto j = estimate_to_json(e);
  CHECK(j.at("window") == json::parse("[1, 4.5]"));
  CHECK(j.at("point_count") == 77);
  CHECK(orbit_line("aB", 2.5) == json::parse(R"({"word": "aB", "dist": 2.5})"));

  const auto ode = ode_to_json(psflow::verify_ode_bound(1.0, 0.5, 0.01, 5.0));
  CHECK(ode.at("crossing_time").is_number());
  CHECK(ode_to_json(psflow::verify_ode_bound(1.0, 0.5, 9.0, 1.0)).at("crossing_time").is_null());

  const auto hd = hd_report_to_json(rankone::hd_bound_report(rankone::RankOneSpace(rankone::Family::Cayley, 2), 13.0));
  CHECK(hd.at("hd_bound") == 11);
  CHECK(hd.at("j_X") == 12);
}
