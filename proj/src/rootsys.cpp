#include "critflow/rootsys.hpp"

#include "critflow/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

namespace critflow::rootsys {

namespace {

constexpr double kTol = 1e-9;

using Key = std::vector<long>;

// Every realization used here has half-integral coordinates.
Key key_of(const Eigen::VectorXd& v) {
  Key k(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) k[static_cast<std::size_t>(i)] = std::lround(2.0 * v(i));
  return k;
}

Eigen::VectorXd unit(int dim, int i, double s = 1.0) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
  v(i) = s;
  return v;
}

std::vector<Eigen::VectorXd> pm_pairs(int dim, int count, bool plus, bool minus) {
  std::vector<Eigen::VectorXd> out;
  for (int i = 0; i < count; ++i)
    for (int j = i + 1; j < count; ++j)
      for (double si : {1.0, -1.0}) {
        if (plus) out.push_back(si * (unit(dim, i) + unit(dim, j)));
        if (minus) out.push_back(si * (unit(dim, i) - unit(dim, j)));
      }
  return out;
}

std::vector<Eigen::VectorXd> e8_roots() {
  auto roots = pm_pairs(8, 8, true, true);
  for (int mask = 0; mask < 256; ++mask) {
    if (__builtin_popcount(static_cast<unsigned>(mask)) % 2 != 0) continue;
    Eigen::VectorXd v(8);
    for (int i = 0; i < 8; ++i) v(i) = (mask >> i) & 1 ? -0.5 : 0.5;
    roots.push_back(v);
  }
  return roots;
}

struct FullSystem {
  int dim;
  std::vector<Eigen::VectorXd> roots;  // all roots, both signs
  Eigen::VectorXd functional;          // generic: defines the positive system
};

FullSystem full_system(RootType type, int r) {
  FullSystem fs;
  auto decreasing = [](int n) {
    Eigen::VectorXd f(n);
    for (int i = 0; i < n; ++i) f(i) = n - i;
    return f;
  };
  switch (type) {
    case RootType::A: {
      if (r == 1) {
        fs.dim = 1;
        fs.roots = {unit(1, 0), unit(1, 0, -1.0)};
        fs.functional = unit(1, 0);
        break;
      }
      fs.dim = r + 1;
      fs.roots = pm_pairs(fs.dim, fs.dim, false, true);
      fs.functional = decreasing(fs.dim);
      break;
    }
    case RootType::B:
    case RootType::C:
    case RootType::D:
    case RootType::BC: {
      fs.dim = r;
      fs.roots = pm_pairs(r, r, true, true);
      for (int i = 0; i < r; ++i)
        for (double s : {1.0, -1.0}) {
          if (type == RootType::B || type == RootType::BC) fs.roots.push_back(unit(r, i, s));
          if (type == RootType::C || type == RootType::BC) fs.roots.push_back(unit(r, i, 2.0 * s));
        }
      fs.functional = decreasing(r);
      break;
    }
    case RootType::G2: {
      fs.dim = 3;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          if (i == j) continue;
          fs.roots.push_back(unit(3, i) - unit(3, j));
          const int k = 3 - i - j;
          if (j < k) {
            Eigen::VectorXd l = 2.0 * unit(3, i) - unit(3, j) - unit(3, k);
            fs.roots.push_back(l);
            fs.roots.push_back(-l);
          }
        }
      fs.functional = Eigen::Vector3d(0.1, -1.05, 0.95);
      break;
    }
    case RootType::F4: {
      fs.dim = 4;
      fs.roots = pm_pairs(4, 4, true, true);
      for (int i = 0; i < 4; ++i)
        for (double s : {1.0, -1.0}) fs.roots.push_back(unit(4, i, s));
      for (int mask = 0; mask < 16; ++mask) {
        Eigen::VectorXd v(4);
        for (int i = 0; i < 4; ++i) v(i) = (mask >> i) & 1 ? -0.5 : 0.5;
        fs.roots.push_back(v);
      }
      fs.functional = Eigen::Vector4d(8, 4, 2, 1);
      break;
    }
    case RootType::E6:
    case RootType::E7:
    case RootType::E8: {
      fs.dim = 8;
      auto all = e8_roots();
      // E7: orthogonal to e7+e8. E6: additionally x6 = x7.
      for (auto& v : all) {
        if (type != RootType::E8 && std::abs(v(6) + v(7)) > kTol) continue;
        if (type == RootType::E6 && std::abs(v(5) - v(6)) > kTol) continue;
        fs.roots.push_back(v);
      }
      fs.functional.resize(8);
      fs.functional << 1, 2, 3, 4, 5, 6, 7, 100;
      break;
    }
  }
  return fs;
}

void check_type_rank(RootType type, int rank) {
  bool ok = false;
  switch (type) {
    case RootType::A: ok = rank >= 1; break;
    case RootType::B: ok = rank >= 2; break;
    case RootType::C: ok = rank >= 2; break;
    case RootType::D: ok = rank >= 4; break;
    case RootType::BC: ok = rank >= 1; break;
    case RootType::E6: ok = rank == 6; break;
    case RootType::E7: ok = rank == 7; break;
    case RootType::E8: ok = rank == 8; break;
    case RootType::F4: ok = rank == 4; break;
    case RootType::G2: ok = rank == 2; break;
  }
  if (!ok)
    throw InputError("invalid root system type/rank pair: " + to_string(type) + " rank " +
                     std::to_string(rank));
}

std::vector<int> indecomposables(const std::vector<PositiveRoot>& roots) {
  std::map<Key, int> index;
  for (std::size_t i = 0; i < roots.size(); ++i) index[key_of(roots[i].coords)] = static_cast<int>(i);
  std::vector<bool> decomposable(roots.size(), false);
  for (std::size_t i = 0; i < roots.size(); ++i)
    for (std::size_t j = i; j < roots.size(); ++j) {
      if (roots[i].component != roots[j].component) continue;
      auto it = index.find(key_of(roots[i].coords + roots[j].coords));
      if (it != index.end()) decomposable[static_cast<std::size_t>(it->second)] = true;
    }
  std::vector<int> out;
  for (std::size_t i = 0; i < roots.size(); ++i)
    if (!decomposable[i]) out.push_back(static_cast<int>(i));
  return out;
}

std::vector<Eigen::VectorXd> dual_generators(const std::vector<PositiveRoot>& roots,
                                             const std::vector<int>& simple, int dim) {
  const int r = static_cast<int>(simple.size());
  Eigen::MatrixXd s(r, dim);
  for (int i = 0; i < r; ++i) s.row(i) = roots[static_cast<std::size_t>(simple[static_cast<std::size_t>(i)])].coords.transpose();
  const Eigen::MatrixXd omega = s.transpose() * (s * s.transpose()).inverse();
  std::vector<Eigen::VectorXd> out;
  for (int i = 0; i < r; ++i) {
    Eigen::VectorXd w = omega.col(i);
    for (Eigen::Index j = 0; j < w.size(); ++j)
      if (std::abs(w(j)) < 1e-14) w(j) = 0.0;
    out.push_back(w);
  }
  return out;
}

int parse_int(std::string_view s, std::string_view what) {
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw InputError("cannot parse integer in " + std::string(what) + ": '" + std::string(s) + "'");
  return v;
}

}  // namespace

std::string to_string(RootType t) {
  switch (t) {
    case RootType::A: return "A";
    case RootType::B: return "B";
    case RootType::C: return "C";
    case RootType::D: return "D";
    case RootType::E6: return "E6";
    case RootType::E7: return "E7";
    case RootType::E8: return "E8";
    case RootType::F4: return "F4";
    case RootType::G2: return "G2";
    case RootType::BC: return "BC";
  }
  return "?";
}

RootType parse_root_type(std::string_view s) {
  static const std::map<std::string, RootType, std::less<>> names = {
      {"A", RootType::A},   {"B", RootType::B},   {"C", RootType::C},   {"D", RootType::D},
      {"E6", RootType::E6}, {"E7", RootType::E7}, {"E8", RootType::E8}, {"F4", RootType::F4},
      {"G2", RootType::G2}, {"BC", RootType::BC}};
  auto it = names.find(s);
  if (it == names.end()) throw InputError("unknown root system type '" + std::string(s) + "'");
  return it->second;
}

int classical_positive_count(RootType type, int r) {
  switch (type) {
    case RootType::A: return r * (r + 1) / 2;
    case RootType::B:
    case RootType::C: return r * r;
    case RootType::D: return r * (r - 1);
    case RootType::BC: return r * (r + 1);
    case RootType::E6: return 36;
    case RootType::E7: return 63;
    case RootType::E8: return 120;
    case RootType::F4: return 24;
    case RootType::G2: return 6;
  }
  return 0;
}

RestrictedRootSystem::RestrictedRootSystem(std::vector<Component> components, int coord_dim,
                                           std::vector<PositiveRoot> roots,
                                           std::vector<Eigen::VectorXd> chamber_generators)
    : components_(std::move(components)),
      coord_dim_(coord_dim),
      roots_(std::move(roots)),
      generators_(std::move(chamber_generators)) {
  if (components_.empty()) throw InputError("root system needs at least one component");
  for (const auto& c : components_) {
    check_type_rank(c.type, c.rank);
    rank_ += c.rank;
  }
  std::vector<int> counts(components_.size(), 0);
  for (const auto& a : roots_) {
    if (a.coords.size() != coord_dim_) throw InputError("root has wrong coordinate dimension");
    if (a.mult < 1) throw InputError("root multiplicity must be positive");
    if (a.component < 0 || a.component >= static_cast<int>(components_.size()))
      throw InputError("root refers to a nonexistent component");
    ++counts[static_cast<std::size_t>(a.component)];
  }
  for (std::size_t c = 0; c < components_.size(); ++c)
    if (counts[c] != classical_positive_count(components_[c].type, components_[c].rank))
      throw InputError("component " + to_string(components_[c].type) +
                       std::to_string(components_[c].rank) + " has " + std::to_string(counts[c]) +
                       " positive roots, expected " +
                       std::to_string(classical_positive_count(components_[c].type, components_[c].rank)));
  if (static_cast<int>(generators_.size()) != rank_)
    throw InputError("need exactly rank many chamber generators");
  for (const auto& g : generators_) {
    if (g.size() != coord_dim_) throw InputError("chamber generator has wrong dimension");
    for (const auto& a : roots_)
      if (a.coords.dot(g) < -kTol) throw InputError("positive root negative on a chamber generator");
  }
  simple_ = indecomposables(roots_);
  if (static_cast<int>(simple_.size()) != rank_)
    throw InputError("found " + std::to_string(simple_.size()) +
                     " indecomposable positive roots, expected rank " + std::to_string(rank_));

  Eigen::MatrixXd cols(coord_dim_, static_cast<Eigen::Index>(roots_.size()));
  for (std::size_t i = 0; i < roots_.size(); ++i) cols.col(static_cast<Eigen::Index>(i)) = roots_[i].coords;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(cols, Eigen::ComputeThinU);
  int span_dim = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > kTol) ++span_dim;
  if (span_dim != rank_) throw InputError("roots do not span a rank-dimensional space");
  span_basis_ = svd.matrixU().leftCols(span_dim);
}

int RestrictedRootSystem::total_multiplicity() const {
  int s = 0;
  for (const auto& a : roots_) s += a.mult;
  return s;
}

Eigen::VectorXd RestrictedRootSystem::chamber_values(const Eigen::VectorXd& covector) const {
  if (covector.size() != coord_dim_) throw InputError("covector has wrong coordinate dimension");
  Eigen::VectorXd out(rank_);
  for (int i = 0; i < rank_; ++i) out(i) = covector.dot(generators_[static_cast<std::size_t>(i)]);
  return out;
}

bool RestrictedRootSystem::is_root(const Eigen::VectorXd& v) const {
  const Key k = key_of(v);
  const Key nk = key_of(-v);
  for (const auto& a : roots_) {
    const Key ka = key_of(a.coords);
    if (ka == k || ka == nk) return true;
  }
  return false;
}

Eigen::VectorXd RestrictedRootSystem::project_to_span(const Eigen::VectorXd& v) const {
  return span_basis_ * (span_basis_.transpose() * v);
}

RestrictedRootSystem RestrictedRootSystem::with_multiplicities(const std::vector<int>& mults) const {
  if (mults.size() != roots_.size()) throw InputError("one multiplicity per positive root required");
  auto roots = roots_;
  for (std::size_t i = 0; i < roots.size(); ++i) roots[i].mult = mults[i];
  return RestrictedRootSystem(components_, coord_dim_, std::move(roots), generators_);
}

RestrictedRootSystem RestrictedRootSystem::with_uniform_multiplicity(int mult) const {
  return with_multiplicities(std::vector<int>(roots_.size(), mult));
}

RestrictedRootSystem build_root_system(RootType type, int rank) {
  check_type_rank(type, rank);
  const FullSystem fs = full_system(type, rank);
  std::vector<PositiveRoot> pos;
  for (const auto& a : fs.roots) {
    const double f = a.dot(fs.functional);
    if (std::abs(f) < kTol) throw NumericalError("positive-system functional is not generic");
    if (f > 0) pos.push_back({a, 1, 0});
  }
  std::sort(pos.begin(), pos.end(), [](const PositiveRoot& x, const PositiveRoot& y) {
    return key_of(x.coords) > key_of(y.coords);
  });
  const auto simple = indecomposables(pos);
  auto gens = dual_generators(pos, simple, fs.dim);
  return RestrictedRootSystem({{type, rank}}, fs.dim, std::move(pos), std::move(gens));
}

RestrictedRootSystem direct_sum(const std::vector<RestrictedRootSystem>& parts) {
  if (parts.empty()) throw InputError("direct sum of no root systems");
  int dim = 0;
  for (const auto& p : parts) dim += p.coord_dim();
  std::vector<Component> comps;
  std::vector<PositiveRoot> roots;
  std::vector<Eigen::VectorXd> gens;
  int offset = 0;
  int comp_offset = 0;
  for (const auto& p : parts) {
    for (const auto& c : p.components()) comps.push_back(c);
    for (const auto& a : p.positive_roots()) {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
      v.segment(offset, p.coord_dim()) = a.coords;
      roots.push_back({v, a.mult, a.component + comp_offset});
    }
    for (const auto& g : p.chamber_generators()) {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
      v.segment(offset, p.coord_dim()) = g;
      gens.push_back(v);
    }
    offset += p.coord_dim();
    comp_offset += static_cast<int>(p.components().size());
  }
  return RestrictedRootSystem(std::move(comps), dim, std::move(roots), std::move(gens));
}

SymmetricSpacePreset sl_preset(int N) {
  if (N < 2) throw InputError("SL(N,R) preset needs N >= 2");
  return {"SL(" + std::to_string(N) + ",R)/SO(" + std::to_string(N) + ")",
          build_root_system(RootType::A, N - 1)};
}

SymmetricSpacePreset split_preset(RootType type, int rank) {
  return {"split " + to_string(type) + std::to_string(rank), build_root_system(type, rank)};
}

SymmetricSpacePreset product_hyperbolic_preset(int n1, int n2) {
  if (n1 < 2 || n2 < 2) throw InputError("hyperbolic factors need dimension >= 2");
  const auto a1 = build_root_system(RootType::A, 1);
  auto rs = direct_sum({a1.with_uniform_multiplicity(n1 - 1), a1.with_uniform_multiplicity(n2 - 1)});
  return {"H^" + std::to_string(n1) + " x H^" + std::to_string(n2), std::move(rs)};
}

SymmetricSpacePreset real_hyperbolic_preset(int n) {
  if (n < 2) throw InputError("real hyperbolic preset needs n >= 2");
  return {"H^" + std::to_string(n),
          build_root_system(RootType::A, 1).with_uniform_multiplicity(n - 1)};
}

SymmetricSpacePreset preset_from_name(std::string_view name) {
  const auto colon = name.find(':');
  if (colon == std::string_view::npos)
    throw InputError("preset must look like sl:N, split:B5, product:n1,n2 or real:n");
  const auto kind = name.substr(0, colon);
  const auto arg = name.substr(colon + 1);
  if (kind == "sl") return sl_preset(parse_int(arg, "sl preset"));
  if (kind == "real") return real_hyperbolic_preset(parse_int(arg, "real preset"));
  if (kind == "product") {
    const auto comma = arg.find(',');
    if (comma == std::string_view::npos) throw InputError("product preset needs n1,n2");
    return product_hyperbolic_preset(parse_int(arg.substr(0, comma), "product preset"),
                                     parse_int(arg.substr(comma + 1), "product preset"));
  }
  if (kind == "split") {
    // Exceptional labels carry their rank; classical ones are letter(s)+rank.
    for (std::string_view ex : {"E6", "E7", "E8", "F4", "G2"})
      if (arg == ex) {
        const RootType t = parse_root_type(arg);
        return split_preset(t, arg.back() - '0');
      }
    std::size_t i = 0;
    while (i < arg.size() && std::isalpha(static_cast<unsigned char>(arg[i]))) ++i;
    return split_preset(parse_root_type(arg.substr(0, i)), parse_int(arg.substr(i), "split preset"));
  }
  throw InputError("unknown preset kind '" + std::string(kind) + "'");
}

Eigen::VectorXd rho(const RestrictedRootSystem& rs) {
  Eigen::VectorXd s = Eigen::VectorXd::Zero(rs.coord_dim());
  for (const auto& a : rs.positive_roots()) s += a.mult * a.coords;
  return 0.5 * s;
}

Eigen::VectorXd rho(const SymmetricSpacePreset& preset) { return rho(preset.roots); }

Eigen::VectorXd highest_root(const RestrictedRootSystem& rs) {
  if (!rs.irreducible()) throw InputError("highest root is undefined for a reducible system");
  const auto& roots = rs.positive_roots();
  std::size_t best = 0;
  double best_h = -1.0;
  int ties = 0;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    const double h = rs.height(roots[i].coords);
    if (h > best_h + kTol) {
      best_h = h;
      best = i;
      ties = 1;
    } else if (std::abs(h - best_h) <= kTol) {
      ++ties;
    }
  }
  if (ties != 1) throw NumericalError("highest root is not unique");
  return roots[best].coords;
}

StronglyOrthogonalSystem strongly_orthogonal_theta(const RestrictedRootSystem& rs) {
  std::vector<Eigen::VectorXd> remaining;
  for (const auto& a : rs.positive_roots()) remaining.push_back(a.coords);
  // Highest first; ties broken lexicographically so the cascade is reproducible.
  std::sort(remaining.begin(), remaining.end(), [&](const auto& x, const auto& y) {
    const double hx = rs.height(x), hy = rs.height(y);
    if (std::abs(hx - hy) > kTol) return hx > hy;
    return key_of(x) > key_of(y);
  });
  StronglyOrthogonalSystem out;
  out.theta = Eigen::VectorXd::Zero(rs.coord_dim());
  while (!remaining.empty()) {
    const Eigen::VectorXd pick = remaining.front();
    out.roots.push_back(pick);
    out.theta += 0.5 * pick;
    std::vector<Eigen::VectorXd> next;
    for (std::size_t i = 1; i < remaining.size(); ++i) {
      const auto& b = remaining[i];
      if (!rs.is_root(pick + b) && !rs.is_root(pick - b)) next.push_back(b);
    }
    remaining = std::move(next);
  }
  return out;
}

int s_eta(const RestrictedRootSystem& rs, const Eigen::VectorXd& eta) {
  const Eigen::VectorXd l = highest_root(rs);
  const Eigen::VectorXd ev = rs.chamber_values(eta);
  if (ev.minCoeff() < -kTol) throw InputError("eta is negative somewhere on the Weyl chamber");
  const Eigen::VectorXd lv = rs.chamber_values(l);
  auto admissible = [&](int s) {
    const Eigen::VectorXd d = ev - s * lv;
    return d.minCoeff() >= -kTol && d.maxCoeff() > kTol;
  };
  int s = 0;
  while (admissible(s + 1)) ++s;
  return s;
}

symform::SymBilinearForm busemann_spectrum(const SymmetricSpacePreset& preset,
                                           const Eigen::VectorXd& u) {
  const auto& rs = preset.roots;
  if (u.size() != rs.coord_dim())
    throw InputError("chamber vector has " + std::to_string(u.size()) + " coordinates, expected " +
                     std::to_string(rs.coord_dim()));
  if (std::abs(u.norm() - 1.0) > kTol) throw InputError("chamber vector must have unit length");
  if ((u - rs.project_to_span(u)).norm() > kTol)
    throw InputError("chamber vector is not in the span of the roots");
  for (int idx : rs.simple_roots())
    if (rs.positive_roots()[static_cast<std::size_t>(idx)].coords.dot(u) < -kTol)
      throw InputError("chamber vector lies outside the closed Weyl chamber");
  std::vector<double> diag(static_cast<std::size_t>(rs.rank()), 0.0);
  for (const auto& a : rs.positive_roots()) {
    double v = a.coords.dot(u);
    if (v < 0.0) v = 0.0;
    for (int m = 0; m < a.mult; ++m) diag.push_back(v);
  }
  std::sort(diag.begin(), diag.end());
  return symform::SymBilinearForm::diagonal(diag);
}

int l_X(const SymmetricSpacePreset& preset, const Eigen::VectorXd& u, double delta) {
  if (!(delta >= 0.0)) throw InputError("delta must be nonnegative");
  const auto profile = symform::k_trace_profile(busemann_spectrum(preset, u));
  for (std::size_t k = 0; k < profile.size(); ++k)
    if (profile[k] > delta) return static_cast<int>(k) + 1;
  return preset.dim() + 1;
}

int gap_bound(const SymmetricSpacePreset& preset, const Eigen::VectorXd& eta) {
  return preset.dim() - s_eta(preset.roots, eta);
}

}  // namespace critflow::rootsys
