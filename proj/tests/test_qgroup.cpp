#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "qanneal/error.hpp"
#include "qanneal/levels.hpp"
#include "qanneal/qgroup.hpp"
#include "qanneal/spectrum.hpp"

using namespace qanneal;

namespace {

// Hubbard operator X_ab = |a><b| with |1> = up (index 0), |2> = down (index 1).
Eigen::Matrix2d hubbard(int a, int b) {
  Eigen::Matrix2d m = Eigen::Matrix2d::Zero();
  m(a - 1, b - 1) = 1.0;
  return m;
}

Eigen::Matrix4d kron(const Eigen::Matrix2d& a, const Eigen::Matrix2d& b) {
  Eigen::Matrix4d out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  }
  return out;
}

Eigen::Matrix4d oracle_r(double q) {
  const Eigen::Matrix4d id = Eigen::Matrix4d::Identity();
  return (id + (q - 1.0) * (kron(hubbard(1, 1), hubbard(1, 1)) + kron(hubbard(2, 2), hubbard(2, 2))) +
          (q - 1.0 / q) * kron(hubbard(1, 2), hubbard(2, 1))) /
         std::sqrt(q);
}

}  // namespace

TEST_CASE("R matrix equals the Hubbard-operator expansion") {
  for (double q : {0.01, 0.3, 1.0, 2.5, 100.0}) {
    const RMatrix r = build_r(q);
    CHECK(r.q == q);
    CHECK((r.entries - oracle_r(q)).cwiseAbs().maxCoeff() <= 1e-13 * std::max(1.0, oracle_r(q).cwiseAbs().maxCoeff()));
    CHECK(r.entries.determinant() == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("R matrix entries by hand") {
  const double q = 0.7;
  const Eigen::Matrix4d r = build_r(q).entries;
  const double s = std::sqrt(q);
  CHECK(r(0, 0) == doctest::Approx(s));
  CHECK(r(1, 1) == doctest::Approx(1.0 / s));
  CHECK(r(2, 2) == doctest::Approx(1.0 / s));
  CHECK(r(3, 3) == doctest::Approx(s));
  CHECK(r(1, 2) == doctest::Approx((q - 1.0 / q) / s));
  CHECK(r(2, 1) == 0.0);
  CHECK((build_r(1.0).entries - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("Yang-Baxter residual") {
  CHECK(ybz_residual(1.0) == 0.0);
  CHECK(ybz_residual(std::exp(-std::numbers::pi * 0.1)) <= 1e-13);
  Engine e = make_engine(2024);
  for (int i = 0; i < 200; ++i) CHECK(ybz_residual(2.0 * uniform_open(e)) <= 1e-12);
  for (double q : log_spaced(1e-2, 1e2, 100)) CHECK(ybz_residual(q) <= 1e-12);
}

TEST_CASE("sigma eigenvalues") {
  const std::array<double, 4> at_one = sigma_eigenvalues(1.0);
  CHECK(at_one[0] == doctest::Approx(-1.0));
  for (int i = 1; i < 4; ++i) CHECK(at_one[i] == doctest::Approx(1.0));

  const double g = 0.2;
  const double q = q_from_g(g);
  const std::array<double, 4> ev = sigma_eigenvalues(q);
  CHECK(std::abs(ev[0] + std::exp(1.5 * std::numbers::pi * g)) <= 1e-12 * std::exp(1.5 * std::numbers::pi * g));
  for (int i = 1; i < 4; ++i) CHECK(std::abs(ev[i] - std::exp(-0.5 * std::numbers::pi * g)) <= 1e-12);

  for (double qq : log_spaced(1e-2, 1e2, 100)) {
    const Eigen::Matrix4d sigma = swap_operator() * build_r(qq).entries;
    const std::array<double, 4> expected = expected_sigma_eigenvalues(qq);
    CHECK(sigma.trace() == doctest::Approx(expected[0] + 3.0 * expected[1]).epsilon(1e-12));
    const QGroupReport rep = qgroup_report(qq);
    CHECK(rep.pass);
    CHECK(rep.max_eigenvalue_error <= 1e-12);
  }
}

TEST_CASE("q and the detailed-balance ratio") {
  for (double g : {0.0, 0.1, 1.0}) CHECK(q_from_g(g) * q_from_g(g) == doctest::Approx(std::exp(-2.0 * std::numbers::pi * g)));
  CHECK_THROWS_AS(build_r(0.0), ValidationError);
  CHECK_THROWS_AS(ybz_residual(-1.0), ValidationError);
}
