#pragma once

// JSON encodings shared by the command line tool and the tests.
// Points and isometries are raw coordinate arrays; matrices are row lists.

#include "critflow/psflow.hpp"
#include "critflow/rankone.hpp"
#include "critflow/rootsys.hpp"
#include "critflow/schottky.hpp"

#include <json.hpp>

namespace critflow::json_io {

using nlohmann::json;

json vector_to_json(const Eigen::VectorXd& v);
Eigen::VectorXd vector_from_json(const json& j, const char* what);
json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const json& j, const char* what);

json root_system_to_json(const rootsys::RestrictedRootSystem& rs);
rootsys::RestrictedRootSystem root_system_from_json(const json& j);

// {generators: [matrix rows...], basepoint: [...], label, free}
json group_spec_to_json(const schottky::SchottkyGroupSpec& spec);
schottky::SchottkyGroupSpec group_spec_from_json(const json& j);

// One orbit-dump line: {word, dist}.
json orbit_line(const std::string& word, double dist);

json estimate_to_json(const schottky::DeltaEstimate& e);

// {delta, atoms: [{point: [...], log_weight}]} in the e0 gauge.
json density_to_json(const psflow::DiscreteBoundaryDensity& mu);
psflow::DiscreteBoundaryDensity density_from_json(const json& j);

json contraction_to_json(const psflow::ContractionReport& r);
json ode_to_json(const psflow::OdeReport& r);
json hd_report_to_json(const rankone::HdBoundReport& r);

}  // namespace critflow::json_io
