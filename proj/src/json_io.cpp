#include "critflow/json_io.hpp"

#include "critflow/error.hpp"

#include <cmath>

namespace critflow::json_io {

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (long i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Eigen::VectorXd vector_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw InputError(std::string(what) + " must be a nonempty array of numbers");
  Eigen::VectorXd v(static_cast<long>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw InputError(std::string(what) + " must contain only numbers");
    v(static_cast<long>(i)) = j[i].get<double>();
  }
  return v;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (long r = 0; r < m.rows(); ++r) out.push_back(vector_to_json(m.row(r).transpose()));
  return out;
}

Eigen::MatrixXd matrix_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw InputError(std::string(what) + " must be a nonempty list of rows");
  const Eigen::VectorXd first = vector_from_json(j[0], what);
  Eigen::MatrixXd m(static_cast<long>(j.size()), first.size());
  for (std::size_t r = 0; r < j.size(); ++r) {
    const Eigen::VectorXd row = vector_from_json(j[r], what);
    if (row.size() != first.size()) throw InputError(std::string(what) + " has rows of different lengths");
    m.row(static_cast<long>(r)) = row.transpose();
  }
  return m;
}

json root_system_to_json(const rootsys::RestrictedRootSystem& rs) {
  json comps = json::array();
  for (const auto& c : rs.components()) comps.push_back({{"type", rootsys::to_string(c.type)}, {"rank", c.rank}});
  json roots = json::array();
  for (const auto& a : rs.positive_roots())
    roots.push_back({{"coords", vector_to_json(a.coords)}, {"mult", a.mult}, {"component", a.component}});
  json gens = json::array();
  for (const auto& g : rs.chamber_generators()) gens.push_back(vector_to_json(g));
  return {{"components", comps}, {"coord_dim", rs.coord_dim()}, {"positive_roots", roots}, {"chamber_generators", gens}};
}

rootsys::RestrictedRootSystem root_system_from_json(const json& j) {
  try {
    std::vector<rootsys::Component> comps;
    for (const auto& c : j.at("components"))
      comps.push_back({rootsys::parse_root_type(c.at("type").get<std::string>()), c.at("rank").get<int>()});
    std::vector<rootsys::PositiveRoot> roots;
    for (const auto& a : j.at("positive_roots"))
      roots.push_back({vector_from_json(a.at("coords"), "root coords"), a.value("mult", 1), a.value("component", 0)});
    std::vector<Eigen::VectorXd> gens;
    for (const auto& g : j.at("chamber_generators")) gens.push_back(vector_from_json(g, "chamber generator"));
    const int dim = j.contains("coord_dim") ? j.at("coord_dim").get<int>()
                                            : static_cast<int>(roots.empty() ? 0 : roots.front().coords.size());
    return rootsys::RestrictedRootSystem(std::move(comps), dim, std::move(roots), std::move(gens));
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed root system JSON: ") + e.what());
  }
}

json group_spec_to_json(const schottky::SchottkyGroupSpec& spec) {
  json gens = json::array();
  for (const auto& g : spec.generators()) gens.push_back(matrix_to_json(g.matrix()));
  return {{"generators", gens},
          {"basepoint", vector_to_json(spec.basepoint().coords())},
          {"label", spec.label()},
          {"free", spec.free_asserted()}};
}

schottky::SchottkyGroupSpec group_spec_from_json(const json& j) {
  try {
    std::vector<hyp::Isometry> gens;
    for (const auto& g : j.at("generators")) gens.emplace_back(matrix_from_json(g, "generator"));
    if (gens.empty()) throw InputError("group spec has no generators");
    const hyp::MinkPoint base = j.contains("basepoint")
                                    ? hyp::MinkPoint(vector_from_json(j.at("basepoint"), "basepoint"))
                                    : hyp::MinkPoint::basepoint(gens.front().n());
    return schottky::SchottkyGroupSpec(std::move(gens), base, j.value("label", std::string("unnamed")),
                                       j.value("free", true));
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed group spec JSON: ") + e.what());
  }
}

json orbit_line(const std::string& word, double dist) { return {{"word", word}, {"dist", dist}}; }

json estimate_to_json(const schottky::DeltaEstimate& e) {
  return {{"value", e.value},
          {"window", {e.window_min, e.window_max}},
          {"point_count", e.point_count},
          {"fit_residual", e.fit_residual}};
}

json density_to_json(const psflow::DiscreteBoundaryDensity& mu) {
  json atoms = json::array();
  for (const auto& a : mu.atoms()) atoms.push_back({{"point", vector_to_json(a.point.coords())}, {"log_weight", a.log_weight}});
  return {{"delta", mu.delta()}, {"atoms", atoms}};
}

psflow::DiscreteBoundaryDensity density_from_json(const json& j) {
  try {
    std::vector<hyp::BoundaryPoint> pts;
    std::vector<double> lw;
    for (const auto& a : j.at("atoms")) {
      pts.emplace_back(vector_from_json(a.at("point"), "atom point"));
      if (a.contains("log_weight")) {
        lw.push_back(a.at("log_weight").get<double>());
      } else {
        const double w = a.at("weight").get<double>();
        if (!(w > 0.0)) throw InputError("atom weights must be positive");
        lw.push_back(std::log(w));
      }
    }
    return psflow::DiscreteBoundaryDensity(j.at("delta").get<double>(), pts, lw);
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed density JSON: ") + e.what());
  }
}

json contraction_to_json(const psflow::ContractionReport& r) {
  return {{"delta", r.delta},
          {"k", r.k},
          {"times", r.times},
          {"log_k_volume", r.log_k_volume},
          {"bound_curve", r.bound_curve},
          {"margin", r.margin},
          {"worst_margin", r.worst_margin},
          {"max_violation", r.max_violation},
          {"tolerance_per_unit_time", psflow::kContractionSlack},
          {"trace_consistency", r.trace_consistency},
          {"max_grad_norm", r.max_grad_norm},
          {"pass", r.pass}};
}

json ode_to_json(const psflow::OdeReport& r) {
  json out = {{"C", r.C},
              {"alpha", r.alpha},
              {"y0", r.y0},
              {"T", r.T},
              {"coefficient", r.coefficient},
              {"min_margin", r.min_margin},
              {"pass", r.pass}};
  out["crossing_time"] = r.crossing_time ? json(*r.crossing_time) : json(nullptr);
  return out;
}

json hd_report_to_json(const rankone::HdBoundReport& r) {
  return {{"hd_bound", r.bound}, {"j_X", r.critical_index}, {"flags", r.flags}};
}

}  // namespace critflow::json_io
