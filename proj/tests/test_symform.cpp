#include "critflow/error.hpp"
#include "critflow/symform.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace critflow;
using symform::SymBilinearForm;

namespace {

SymBilinearForm d0112() {
  const double v[] = {0, 1, 1, 2};
  return SymBilinearForm::diagonal(v);
}

}  // namespace

TEST_CASE("eigenvalues of simple forms") {
  CHECK(symform::eigenvalues_ascending(d0112()) == std::vector<double>{0, 1, 1, 2});
  CHECK(symform::eigenvalues_ascending(SymBilinearForm::identity(3)) == std::vector<double>{1, 1, 1});
  Eigen::MatrixXd m(2, 2);
  m << 1, 2, 2, 1;
  const auto ev = symform::eigenvalues_ascending(SymBilinearForm(m));
  // 1 -+ 2 from the 2x2 formula (a+d)/2 -+ sqrt(((a-d)/2)^2 + b^2).
  CHECK(ev[0] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(ev[1] == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("construction symmetrizes and rejects bad input") {
  Eigen::MatrixXd m(2, 2);
  m << 1, 4, 0, 1;
  const SymBilinearForm a(m);
  CHECK(a(0, 1) == a(1, 0));
  CHECK(a(0, 1) == 2.0);
  CHECK_THROWS_AS(SymBilinearForm(Eigen::MatrixXd(0, 0)), InputError);
  m(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(SymBilinearForm{m}, InputError);
  CHECK_THROWS_AS(SymBilinearForm(Eigen::MatrixXd::Zero(2, 3)), InputError);
}

TEST_CASE("spectral reconstruction residual") {
  support::Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int dim = 1 + trial % 12;
    const SymBilinearForm a(support::random_symmetric(rng, dim, 3.0));
    const auto ev = symform::eigenvalues_ascending(a);
    const Eigen::MatrixXd q = symform::eigenvectors_ascending(a);
    const Eigen::VectorXd lam = Eigen::Map<const Eigen::VectorXd>(ev.data(), dim);
    const double res = (a.matrix() - q * lam.asDiagonal() * q.transpose()).norm();
    CHECK(res <= 1e-10 * (1.0 + a.matrix().norm()));
    for (int i = 1; i < dim; ++i) CHECK(ev[i - 1] <= ev[i]);
  }
}

TEST_CASE("k_trace examples") {
  CHECK(symform::k_trace(d0112(), 2) == 1.0);
  CHECK(symform::k_trace(d0112(), 4) == 4.0);
  CHECK_THROWS_AS(symform::k_trace(d0112(), 0), InputError);
  CHECK_THROWS_AS(symform::k_trace(d0112(), 5), InputError);

  support::Rng rng(3);
  const Eigen::MatrixXd q = support::random_frame(rng, 4, 4);
  const SymBilinearForm rotated(q.transpose() * d0112().matrix() * q);
  // Oracle: the spectrum is rotation invariant, so the 3 smallest are 0,1,1.
  CHECK(symform::k_trace(rotated, 3) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("trace_on_subspace examples") {
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(4, 2);
  v(0, 0) = v(1, 1) = 1;
  CHECK(symform::trace_on_subspace(d0112(), v) == 1.0);
  v.setZero();
  v(2, 0) = v(3, 1) = 1;
  CHECK(symform::trace_on_subspace(d0112(), v) == 3.0);
  support::Rng rng(5);
  const SymBilinearForm a(support::random_symmetric(rng, 6));
  CHECK(symform::trace_on_subspace(a, Eigen::MatrixXd::Identity(6, 6)) == doctest::Approx(a.trace()));
  Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(4, 2);
  bad(0, 0) = 1;
  bad(0, 1) = 1;
  CHECK_THROWS_AS(symform::trace_on_subspace(d0112(), bad), InputError);
}

TEST_CASE("variational lower bound, tightness and increments") {
  support::Rng rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const int dim = 2 + trial % 10;
    const SymBilinearForm a(support::random_symmetric(rng, dim));
    const auto ev = symform::eigenvalues_ascending(a);
    const auto prof = symform::k_trace_profile(a);
    const Eigen::MatrixXd q = symform::eigenvectors_ascending(a);
    for (int k = 1; k <= dim; ++k) {
      const double tk = symform::k_trace(a, k);
      CHECK(prof[k - 1] == doctest::Approx(tk).epsilon(1e-14));
      for (int s = 0; s < 50; ++s)
        CHECK(symform::trace_on_subspace(a, support::random_frame(rng, dim, k)) >= tk - 1e-9);
      CHECK(std::abs(symform::trace_on_subspace(a, q.leftCols(k)) - tk) <= 1e-8);
      if (k < dim) CHECK(std::abs(symform::k_trace(a, k + 1) - tk - ev[k]) <= 1e-9);
    }
  }
}

TEST_CASE("superadditivity") {
  support::Rng rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const int dim = 1 + trial % 9;
    const SymBilinearForm a(support::random_symmetric(rng, dim)), b(support::random_symmetric(rng, dim));
    for (int k = 1; k <= dim; ++k)
      CHECK(symform::k_trace(a + b, k) >= symform::k_trace(a, k) + symform::k_trace(b, k) - 1e-9);
  }
}
