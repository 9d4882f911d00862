#pragma once

#include <array>

#include <Eigen/Dense>

namespace qanneal {

/// Two-spin R-matrix of the quantum-group family on the ordered basis
/// (↑↑, ↑↓, ↓↑, ↓↓):
///   R = q^{-1/2} (I + (q-1)(X11⊗X11 + X22⊗X22) + (q - 1/q) X12⊗X21),
/// with Hubbard operators X_ab = |a><b|, |1> = ↑, |2> = ↓.
struct RMatrix {
  double q = 1.0;
  Eigen::Matrix4d entries = Eigen::Matrix4d::Identity();
};

/// Deformation parameter matched to the annealing coupling, q = exp(-pi g).
double q_from_g(double g);

RMatrix build_r(double q);

/// Two-spin swap operator on the same basis.
Eigen::Matrix4d swap_operator();

/// max |R12 R13 R23 - R23 R13 R12| on the three-spin space.
double ybz_residual(double q);

/// Eigenvalues of sigma = P R (P the swap), ascending.
std::array<double, 4> sigma_eigenvalues(double q);
/// {-q^{-3/2}, sqrt q, sqrt q, sqrt q}, ascending.
std::array<double, 4> expected_sigma_eigenvalues(double q);

struct QGroupReport {
  double q = 1.0;
  double ybz_residual = 0.0;
  std::array<double, 4> eigenvalues{};
  std::array<double, 4> expected{};
  double max_eigenvalue_error = 0.0;  ///< relative to max(1, |expected|)
  bool pass = false;
};

QGroupReport qgroup_report(double q, double tolerance = 1e-12);

}  // namespace qanneal
