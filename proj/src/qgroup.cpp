#include "qanneal/qgroup.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "qanneal/error.hpp"

namespace qanneal {

namespace {

template <typename Scalar>
using Matrix8 = Eigen::Matrix<Scalar, 8, 8>;
template <typename Scalar>
using Matrix4 = Eigen::Matrix<Scalar, 4, 4>;

void check_q(double q) {
  if (!(q > 0.0) || !std::isfinite(q)) throw ValidationError("deformation parameter q must be positive");
}

template <typename Scalar>
Matrix4<Scalar> r_entries(Scalar q) {
  // Index 2a + b for spins (a, b); 0 = ↑, 1 = ↓.
  Matrix4<Scalar> r = Matrix4<Scalar>::Identity();
  r(0, 0) += q - 1;      // X11 ⊗ X11 = |↑↑><↑↑|
  r(3, 3) += q - 1;      // X22 ⊗ X22 = |↓↓><↓↓|
  r(1, 2) += q - 1 / q;  // X12 ⊗ X21 = |↑↓><↓↑|
  r /= std::sqrt(q);
  return r;
}

// Embeds a two-spin operator acting on spins (a, b) of a three-spin register.
// Spin 0 is the most significant bit of the basis index; bit value 0 is ↑.
template <typename Scalar>
Matrix8<Scalar> embed(const Matrix4<Scalar>& op, int a, int b) {
  Matrix8<Scalar> out = Matrix8<Scalar>::Zero();
  const int c = 3 - a - b;
  auto bit = [](int state, int spin) { return (state >> (2 - spin)) & 1; };
  for (int row = 0; row < 8; ++row) {
    for (int col = 0; col < 8; ++col) {
      if (bit(row, c) != bit(col, c)) continue;
      const int r2 = 2 * bit(row, a) + bit(row, b);
      const int c2 = 2 * bit(col, a) + bit(col, b);
      out(row, col) = op(r2, c2);
    }
  }
  return out;
}

}  // namespace

double q_from_g(double g) { return std::exp(-std::numbers::pi * g); }

RMatrix build_r(double q) {
  check_q(q);
  return {q, r_entries(q)};
}

Eigen::Matrix4d swap_operator() {
  Eigen::Matrix4d p = Eigen::Matrix4d::Zero();
  p(0, 0) = 1.0;
  p(1, 2) = 1.0;
  p(2, 1) = 1.0;
  p(3, 3) = 1.0;
  return p;
}

double ybz_residual(double q) {
  check_q(q);
  // Entries reach |q - 1/q|/sqrt(q) ~ 1e3 at q = 1e-2, so the triple products carry
  // double-precision roundoff of order 1e-10. Extended precision keeps the
  // residual a test of the identity rather than of the arithmetic.
  using Scalar = long double;
  const Matrix4<Scalar> r = r_entries<Scalar>(q);
  const Matrix8<Scalar> r12 = embed(r, 0, 1);
  const Matrix8<Scalar> r13 = embed(r, 0, 2);
  const Matrix8<Scalar> r23 = embed(r, 1, 2);
  return static_cast<double>((r12 * r13 * r23 - r23 * r13 * r12).cwiseAbs().maxCoeff());
}

std::array<double, 4> sigma_eigenvalues(double q) {
  const Eigen::Matrix4d sigma = swap_operator() * build_r(q).entries;
  Eigen::EigenSolver<Eigen::Matrix4d> solver(sigma, false);
  if (solver.info() != Eigen::Success) throw InvariantError("eigensolver failed for sigma");
  std::array<double, 4> out{};
  for (int i = 0; i < 4; ++i) {
    const auto lambda = solver.eigenvalues()(i);
    if (std::abs(lambda.imag()) > 1e-12 * std::max(1.0, std::abs(lambda))) {
      throw InvariantError("sigma has a complex eigenvalue for real q");
    }
    out[i] = lambda.real();
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::array<double, 4> expected_sigma_eigenvalues(double q) {
  check_q(q);
  const double s = std::sqrt(q);
  return {-1.0 / (q * s), s, s, s};
}

QGroupReport qgroup_report(double q, double tolerance) {
  QGroupReport rep;
  rep.q = q;
  rep.ybz_residual = ybz_residual(q);
  rep.eigenvalues = sigma_eigenvalues(q);
  rep.expected = expected_sigma_eigenvalues(q);
  for (int i = 0; i < 4; ++i) {
    const double scale = std::max(1.0, std::abs(rep.expected[i]));
    rep.max_eigenvalue_error = std::max(rep.max_eigenvalue_error, std::abs(rep.eigenvalues[i] - rep.expected[i]) / scale);
  }
  rep.pass = rep.ybz_residual <= tolerance && rep.max_eigenvalue_error <= tolerance;
  return rep;
}

}  // namespace qanneal
