#include "critflow/psflow.hpp"

#include "critflow/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

namespace critflow::psflow {

namespace {

// J v for the Minkowski form J = diag(-1, 1, ..., 1).
Eigen::VectorXd flip(const Eigen::VectorXd& v) {
  Eigen::VectorXd out = v;
  out(0) = -out(0);
  return out;
}

Eigen::MatrixXd flip_rows(const Eigen::MatrixXd& m) {
  Eigen::MatrixXd out = m;
  out.row(0) *= -1.0;
  return out;
}

// Everything the flow needs at an ambient point x (which may sit slightly
// off the hyperboloid inside a Runge-Kutta stage).
struct Field {
  double log_norm = 0.0;
  Eigen::VectorXd grad;  // ambient grad f
  Eigen::MatrixXd gmat;  // Busemann gradients, one per column
  Eigen::VectorXd pi;    // normalized masses at x
};

Field evaluate(const DiscreteBoundaryDensity& mu, const Eigen::VectorXd& x, bool want_columns) {
  const Eigen::MatrixXd& b = mu.atom_matrix();
  const double delta = mu.delta();
  const Eigen::VectorXd s = -(b.transpose() * flip(x));
  if (!(s.minCoeff() > 0.0)) throw NumericalError("-<x,b> must be positive; point or boundary data is corrupted");
  const Eigen::VectorXd a = mu.log_weights() - delta * s.array().log().matrix();
  const double top = a.maxCoeff();
  const Eigen::VectorXd w = (a.array() - top).exp().matrix();
  const double total = w.sum();
  Field out;
  out.log_norm = top + std::log(total);
  out.pi = w / total;
  const Eigen::VectorXd ratio = out.pi.cwiseQuotient(s);
  out.grad = delta * (x - b * ratio);
  if (want_columns) {
    out.gmat = x * Eigen::RowVectorXd::Ones(b.cols()) - b * s.cwiseInverse().asDiagonal();
  }
  return out;
}

// H = delta I - delta (1+delta) sum pi g g^T J + grad grad^T J.
Eigen::MatrixXd ambient_hessian(const Field& f, double delta) {
  const long dim = f.grad.size();
  const Eigen::MatrixXd w = f.gmat * f.pi.asDiagonal() * f.gmat.transpose();
  Eigen::MatrixXd m = -delta * (1.0 + delta) * w + f.grad * f.grad.transpose();
  m.col(0) *= -1.0;  // right multiplication by J
  return delta * Eigen::MatrixXd::Identity(dim, dim) + m;
}

void check_delta(double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw InputError("density exponent delta must be positive and finite");
}

double log_add(double a, double b) {
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

}  // namespace

DiscreteBoundaryDensity::DiscreteBoundaryDensity(double delta, const std::vector<hyp::BoundaryPoint>& points,
                                                 const std::vector<double>& log_weights,
                                                 const std::optional<hyp::MinkPoint>& basepoint)
    : delta_(delta) {
  check_delta(delta);
  if (points.empty()) throw InputError("a density needs at least one atom");
  if (points.size() != log_weights.size()) throw InputError("one weight per atom is required");
  n_ = points.front().n();
  if (basepoint && basepoint->n() != n_) throw InputError("basepoint dimension does not match the atoms");

  std::vector<double> lw(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].n() != n_) throw InputError("atoms live in different dimensions");
    if (!std::isfinite(log_weights[i])) throw InputError("atom weights must be finite and positive");
    lw[i] = log_weights[i] + (basepoint ? delta * hyp::busemann(*basepoint, points[i]) : 0.0);
  }

  // Sort by first direction coordinate so that near-duplicates sit together.
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return points[i].coords()(1) < points[j].coords()(1); });
  for (std::size_t idx : order) {
    const Eigen::VectorXd& c = points[idx].coords();
    bool merged = false;
    for (auto it = atoms_.rbegin(); it != atoms_.rend(); ++it) {
      if (c(1) - it->point.coords()(1) > kMergeAngle) break;
      if ((c - it->point.coords()).norm() < kMergeAngle) {
        it->log_weight = log_add(it->log_weight, lw[idx]);
        merged = true;
        break;
      }
    }
    if (merged) {
      ++merged_;
    } else {
      atoms_.push_back(Atom{points[idx], lw[idx]});
    }
  }
  degenerate_ = points.size() > 1 && atoms_.size() == 1;
  rebuild_cache();
}

void DiscreteBoundaryDensity::rebuild_cache() {
  bmat_.resize(n_ + 1, static_cast<long>(atoms_.size()));
  lw_.resize(static_cast<long>(atoms_.size()));
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    bmat_.col(static_cast<long>(i)) = atoms_[i].point.coords();
    lw_(static_cast<long>(i)) = atoms_[i].log_weight;
  }
}

double DiscreteBoundaryDensity::log_total_weight() const {
  const double top = lw_.maxCoeff();
  return top + std::log((lw_.array() - top).exp().sum());
}

DiscreteBoundaryDensity DiscreteBoundaryDensity::scaled(double c) const {
  if (!(c > 0.0) || !std::isfinite(c)) throw InputError("scale factor must be positive and finite");
  DiscreteBoundaryDensity out = *this;
  const double lc = std::log(c);
  for (auto& a : out.atoms_) a.log_weight += lc;
  out.lw_.array() += lc;
  return out;
}

DiscreteBoundaryDensity density_from_orbit(const std::vector<schottky::OrbitPoint>& orbit, double delta,
                                           const hyp::MinkPoint& basepoint) {
  if (orbit.empty()) throw InputError("density_from_orbit needs a nonempty orbit");
  std::vector<hyp::BoundaryPoint> pts;
  std::vector<double> lw;
  const Eigen::VectorXd& p = basepoint.coords();
  for (const auto& o : orbit) {
    const Eigen::VectorXd& y = o.point.coords();
    const hyp::TangentVec v = hyp::TangentVec::project(basepoint, y + hyp::minkowski(y, p) * p);
    pts.push_back(hyp::boundary_endpoint(basepoint, v.normalized()));
    lw.push_back(-delta * o.dist);
  }
  return DiscreteBoundaryDensity(delta, pts, lw, basepoint);
}

DiscreteBoundaryDensity density_from_group(const schottky::SchottkyGroupSpec& spec, int max_word_len,
                                           double delta, std::uint64_t cap) {
  check_delta(delta);
  const hyp::MinkPoint& base = spec.basepoint();
  const Eigen::VectorXd& p = base.coords();
  std::vector<hyp::BoundaryPoint> pts;
  std::vector<double> lw;
  schottky::for_each_orbit_point(spec, max_word_len, cap,
                                 [&](const std::string&, const Eigen::VectorXd& y, double dist) {
                                   const Eigen::VectorXd dir = y + hyp::minkowski(y, p) * p;
                                   const hyp::TangentVec v = hyp::TangentVec::project(base, dir / dir.norm());
                                   pts.push_back(hyp::boundary_endpoint(base, v.normalized()));
                                   lw.push_back(-delta * dist);
                                 });
  return DiscreteBoundaryDensity(delta, pts, lw, base);
}

double log_norm_mu(const DiscreteBoundaryDensity& mu, const hyp::MinkPoint& x) {
  if (x.n() != mu.n()) throw InputError("point dimension does not match the density");
  return evaluate(mu, x.coords(), false).log_norm;
}

double norm_mu(const DiscreteBoundaryDensity& mu, const hyp::MinkPoint& x) {
  const double v = std::exp(log_norm_mu(mu, x));
  if (!std::isfinite(v) || v == 0.0) throw NumericalError("||mu_x|| is outside double range; use log_norm_mu");
  return v;
}

double potential_f(const DiscreteBoundaryDensity& mu, const hyp::MinkPoint& x) { return -log_norm_mu(mu, x); }

hyp::TangentVec grad_f(const DiscreteBoundaryDensity& mu, const hyp::MinkPoint& x) {
  if (x.n() != mu.n()) throw InputError("point dimension does not match the density");
  return hyp::TangentVec::project(x, evaluate(mu, x.coords(), false).grad);
}

Eigen::MatrixXd hess_operator(const DiscreteBoundaryDensity& mu, const hyp::MinkPoint& x) {
  if (x.n() != mu.n()) throw InputError("point dimension does not match the density");
  return ambient_hessian(evaluate(mu, x.coords(), true), mu.delta());
}

symform::SymBilinearForm hess_f(const DiscreteBoundaryDensity& mu, const hyp::MinkPoint& x) {
  return hess_f(mu, x, hyp::tangent_basis(x));
}

symform::SymBilinearForm hess_f(const DiscreteBoundaryDensity& mu, const hyp::MinkPoint& x,
                                const Eigen::MatrixXd& basis) {
  if (basis.rows() != x.coords().size()) throw InputError("tangent basis has the wrong ambient dimension");
  if (x.n() != mu.n()) throw InputError("point dimension does not match the density");
  // Work with the tangent components of the Busemann gradients directly;
  // going through the ambient operator costs a factor x0^4 in rounding.
  const Field f = evaluate(mu, x.coords(), false);
  const double delta = mu.delta();
  const Eigen::MatrixXd eb = flip_rows(basis).transpose();
  const Eigen::VectorXd s = -(mu.atom_matrix().transpose() * flip(x.coords()));
  const Eigen::MatrixXd g = -(eb * mu.atom_matrix()) * s.cwiseInverse().asDiagonal();
  const Eigen::VectorXd df = delta * (g * f.pi);
  const Eigen::MatrixXd h = delta * (eb * basis) - delta * (1.0 + delta) * (g * f.pi.asDiagonal() * g.transpose()) +
                            df * df.transpose();
  return symform::SymBilinearForm(h);
}

std::vector<FlowState> integrate_flow(const DiscreteBoundaryDensity& mu, const hyp::MinkPoint& x0,
                                      const std::vector<hyp::TangentVec>& frame0, double T, double dt,
                                      Sense sense) {
  if (x0.n() != mu.n()) throw InputError("start point dimension does not match the density");
  if (!(T > 0.0) || !std::isfinite(T)) throw InputError("flow time T must be positive");
  if (!(dt > 0.0) || dt > 1e-2) throw InputError("dt must lie in (0, 1e-2]");
  const int k = static_cast<int>(frame0.size());
  const long dim = x0.coords().size();
  if (k < 1 || k > x0.n()) throw InputError("frame size k must lie in [1, n]");

  Eigen::MatrixXd y(dim, k);
  for (int j = 0; j < k; ++j) {
    if ((frame0[static_cast<std::size_t>(j)].base().coords() - x0.coords()).norm() > 1e-9)
      throw InputError("frame vectors must be based at the start point");
    y.col(j) = frame0[static_cast<std::size_t>(j)].coords();
  }
  const Eigen::MatrixXd gram0 = flip_rows(y).transpose() * y;
  if ((gram0 - Eigen::MatrixXd::Identity(k, k)).cwiseAbs().maxCoeff() > 1e-8)
    throw InputError("initial frame must be orthonormal");

  const double sigma = sense == Sense::Forward ? 1.0 : -1.0;
  const double delta = mu.delta();

  struct Deriv {
    Eigen::VectorXd dx;
    Eigen::MatrixXd dy;
    double dl;
  };
  auto rhs = [&](const Eigen::VectorXd& x, const Eigen::MatrixXd& yy) {
    const Field f = evaluate(mu, x, true);
    const Eigen::MatrixXd h = ambient_hessian(f, delta);
    const Eigen::MatrixXd hy = h * yy;
    const Eigen::MatrixXd yj = flip_rows(yy);
    const Eigen::MatrixXd g = yj.transpose() * yy;
    const double tr = g.ldlt().solve(yj.transpose() * hy).trace();
    Deriv d;
    d.dx = sigma * f.grad;
    // Ambient variational equation: covariant part plus the normal term <grad, Y> x.
    d.dy = sigma * (hy + x * (flip(f.grad).transpose() * yy));
    d.dl = sigma * tr;
    return d;
  };

  auto make_state = [&](const Eigen::VectorXd& x, const Eigen::MatrixXd& yy, double t, double lv, double lt) {
    hyp::MinkPoint pt = hyp::MinkPoint::project(x);
    std::vector<hyp::TangentVec> fr;
    for (int j = 0; j < k; ++j) fr.push_back(hyp::TangentVec::project(pt, yy.col(j)));
    const hyp::TangentVec g = grad_f(mu, pt);
    const double gn = g.norm();
    return FlowState{std::move(pt), t, std::move(fr), lv, lt, gn};
  };

  std::vector<FlowState> states;
  const long steps = static_cast<long>(std::ceil(T / dt - 1e-9));
  states.reserve(static_cast<std::size_t>(steps) + 1);
  Eigen::VectorXd x = x0.coords();
  double log_vol = 0.0;
  double log_trace = 0.0;
  states.push_back(make_state(x, y, 0.0, 0.0, 0.0));

  for (long i = 0; i < steps; ++i) {
    const double t = i * dt;
    const double h = std::min(dt, T - t);
    const Deriv k1 = rhs(x, y);
    const Deriv k2 = rhs(x + 0.5 * h * k1.dx, y + 0.5 * h * k1.dy);
    const Deriv k3 = rhs(x + 0.5 * h * k2.dx, y + 0.5 * h * k2.dy);
    const Deriv k4 = rhs(x + h * k3.dx, y + h * k3.dy);
    Eigen::VectorXd xn = x + h / 6.0 * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx);
    Eigen::MatrixXd yn = y + h / 6.0 * (k1.dy + 2.0 * k2.dy + 2.0 * k3.dy + k4.dy);
    log_trace += h / 6.0 * (k1.dl + 2.0 * k2.dl + 2.0 * k3.dl + k4.dl);

    const double drift = std::abs(hyp::minkowski(xn, xn) + 1.0);
    if (drift > kDriftTol)
      throw NumericalError("hyperboloid drift " + std::to_string(drift) + " at t = " + std::to_string(t + h) +
                           "; use a smaller dt");
    x = hyp::MinkPoint::project(xn).coords();
    // Back onto T_x, then Minkowski Gram-Schmidt; the discarded triangular
    // factor carries the volume change.
    yn += x * (flip(x).transpose() * yn);
    const Eigen::MatrixXd g = flip_rows(yn).transpose() * yn;
    const Eigen::LLT<Eigen::MatrixXd> llt(g);
    if (llt.info() != Eigen::Success) throw NumericalError("transported frame became degenerate");
    const Eigen::MatrixXd l = llt.matrixL();
    log_vol += l.diagonal().array().log().sum();
    y = llt.matrixL().solve(yn.transpose()).transpose();
    states.push_back(make_state(x, y, t + h, log_vol, log_trace));
  }
  return states;
}

ContractionReport verify_contraction(const std::vector<FlowState>& states, const DiscreteBoundaryDensity& mu,
                                     int k) {
  if (states.empty()) throw InputError("verify_contraction needs a nonempty trajectory");
  if (k < 1 || static_cast<std::size_t>(k) != states.front().frame.size())
    throw InputError("k must match the transported frame size");
  ContractionReport r;
  r.delta = mu.delta();
  r.k = k;
  const double rate = mu.delta() * (k - 1 - mu.delta());
  const double l0 = states.front().log_k_volume;
  const double lt0 = states.front().log_k_volume_trace;
  const double t0 = states.front().t;
  const double span = std::max(states.back().t - t0, std::numeric_limits<double>::min());
  r.worst_margin = std::numeric_limits<double>::infinity();
  r.max_violation = -std::numeric_limits<double>::infinity();
  for (const auto& s : states) {
    const double t = s.t - t0;
    const double lv = s.log_k_volume - l0;
    const double bound = -rate * t + 0.0;  // no negative zero in reports
    r.times.push_back(t);
    r.log_k_volume.push_back(lv);
    r.bound_curve.push_back(bound);
    r.margin.push_back(bound - lv);
    r.worst_margin = std::min(r.worst_margin, bound - lv);
    r.max_violation = std::max(r.max_violation, lv - bound - kContractionSlack * t);
    r.trace_consistency =
        std::max(r.trace_consistency, std::abs(lv - (s.log_k_volume_trace - lt0)) / span);
    r.max_grad_norm = std::max(r.max_grad_norm, s.grad_norm);
  }
  r.pass = r.max_violation <= 0.0;
  return r;
}

OdeReport verify_ode_bound(double C, double alpha, double y0, double T) {
  if (!(C > 0.0) || !std::isfinite(C)) throw InputError("C must be positive");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("alpha must lie in (0, 1)");
  if (!(y0 > 0.0) || !std::isfinite(y0)) throw InputError("y0 must be positive");
  if (!(T > 0.0) || !std::isfinite(T)) throw InputError("T must be positive");
  constexpr double dt = 1e-4;
  constexpr double tol = 1e-6;
  OdeReport r{C, alpha, y0, T, y0 - std::pow(y0, alpha) / (C * (1.0 - alpha)), 0.0, std::nullopt, false};
  auto f = [&](double y) { return C * y - std::pow(std::max(y, 0.0), alpha); };
  double y = y0;
  r.min_margin = y0 - r.coefficient;
  const long steps = static_cast<long>(std::ceil(T / dt - 1e-9));
  for (long i = 0; i < steps; ++i) {
    const double t = i * dt;
    const double h = std::min(dt, T - t);
    const double k1 = f(y);
    const double k2 = f(y + 0.5 * h * k1);
    const double k3 = f(y + 0.5 * h * k2);
    const double k4 = f(y + h * k3);
    y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (y <= 0.0) {
      r.crossing_time = t + h;
      r.pass = false;
      return r;
    }
    r.min_margin = std::min(r.min_margin, y - r.coefficient * std::exp(C * (t + h)));
  }
  r.pass = r.min_margin >= -tol;
  return r;
}

GrowthProfile norm_growth_profile(const DiscreteBoundaryDensity& mu, const hyp::MinkPoint& x0,
                                  const hyp::TangentVec& v, double T, int samples) {
  if (samples < 2) throw InputError("need at least two samples");
  if (!(T > 0.0)) throw InputError("T must be positive");
  const hyp::MinkPoint origin = hyp::MinkPoint::basepoint(x0.n());
  GrowthProfile g;
  for (int i = 0; i < samples; ++i) {
    const double t = T * i / (samples - 1);
    const hyp::MinkPoint x = hyp::exp_map(x0, v, t);
    g.distance.push_back(hyp::distance(origin, x));
    g.log_norm.push_back(log_norm_mu(mu, x));
  }
  const auto n = static_cast<double>(samples);
  const double md = std::accumulate(g.distance.begin(), g.distance.end(), 0.0) / n;
  const double ml = std::accumulate(g.log_norm.begin(), g.log_norm.end(), 0.0) / n;
  double sxx = 0, sxy = 0;
  for (int i = 0; i < samples; ++i) {
    sxx += (g.distance[i] - md) * (g.distance[i] - md);
    sxy += (g.distance[i] - md) * (g.log_norm[i] - ml);
  }
  g.rate = sxx > 0.0 ? sxy / sxx : 0.0;
  return g;
}

void write_trajectory_csv(std::ostream& os, const std::vector<FlowState>& states, const ContractionReport& report) {
  if (states.size() != report.times.size()) throw InputError("report does not match the trajectory");
  const int dim = static_cast<int>(states.front().x.coords().size());
  os << "t";
  for (int i = 0; i < dim; ++i) os << ",x" << i;
  os << ",log_k_volume,bound_curve,margin\n";
  os.precision(12);
  for (std::size_t s = 0; s < states.size(); ++s) {
    os << states[s].t;
    for (int i = 0; i < dim; ++i) os << ',' << states[s].x.coords()(i);
    os << ',' << report.log_k_volume[s] << ',' << report.bound_curve[s] << ',' << report.margin[s] << '\n';
  }
}

}  // namespace critflow::psflow
