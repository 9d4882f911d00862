#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qanneal/levels.hpp"
#include "qanneal/spin_sector.hpp"

namespace qanneal {

using cplx = std::complex<double>;

enum class ModelKind { bcs, three_body };

std::string to_string(ModelKind kind);

/// Per-spin factors of the separable three-spin couplings J_ijk = J_i J_j J_k.
struct ThreeBodyCouplings {
  std::vector<double> J;
  double variance = 0.0;
  std::optional<std::uint64_t> seed;
};

/// J_i ~ Normal(0, variance), drawn with `standard_normal` from `make_engine(seed)`.
ThreeBodyCouplings generate_three_body_couplings(int n, double variance, std::uint64_t seed);

/// Sum over ordered triples of distinct spins of J_i J_j J_k s_i s_j s_k.
double three_body_energy(const ThreeBodyCouplings& couplings, Microstate ms, int n_spins);

/// Real symmetric operator on a sector: diagonal plus upper-triangle entries
/// (row < col). The lower triangle is implied by symmetry.
struct HermitianOperator {
  struct Entry {
    std::size_t row;
    std::size_t col;
    double value;
  };
  std::vector<double> diagonal;
  std::vector<Entry> upper;

  [[nodiscard]] std::size_t dimension() const noexcept { return diagonal.size(); }
  [[nodiscard]] Eigen::MatrixXd dense() const;
};

/// Pair-hopping adjacency of a sector: row i lists every state reached by
/// moving one up-spin onto one down-spin, i.e. the action of
/// sum_{j != k} s_j^+ s_k^-. Each row holds exactly n_up * n_down entries.
class PairHopping {
 public:
  explicit PairHopping(const SpinSector& sector);

  [[nodiscard]] std::size_t dimension() const noexcept { return row_start_.size() - 1; }
  [[nodiscard]] std::span<const std::uint32_t> row(std::size_t i) const {
    return {cols_.data() + row_start_[i], cols_.data() + row_start_[i + 1]};
  }
  [[nodiscard]] std::size_t nonzeros() const noexcept { return cols_.size(); }

 private:
  std::vector<std::size_t> row_start_;
  std::vector<std::uint32_t> cols_;
};

/// H(t) = E_Ising - (g/t) sum_{j != k} s_j^+ s_k^- restricted to a sector.
///
/// The Ising part is either the BCS field term sum_j eps_j s_j^z or the
/// three-body term; the hopping part is shared by both models. Immutable after
/// construction, so one instance may be applied concurrently.
class DrivenHamiltonian {
 public:
  static DrivenHamiltonian bcs(std::shared_ptr<const SpinSector> sector, const EnergyLevels& levels);
  static DrivenHamiltonian three_body(std::shared_ptr<const SpinSector> sector, const ThreeBodyCouplings& couplings);

  [[nodiscard]] ModelKind kind() const noexcept { return kind_; }
  [[nodiscard]] const SpinSector& sector() const noexcept { return *sector_; }
  [[nodiscard]] std::shared_ptr<const SpinSector> sector_ptr() const noexcept { return sector_; }
  [[nodiscard]] std::size_t dimension() const noexcept { return diagonal_.size(); }
  [[nodiscard]] std::span<const double> ising_diagonal() const noexcept { return diagonal_; }
  [[nodiscard]] const PairHopping& hopping() const noexcept { return *hopping_; }

  /// out = H(t) in. Throws ValidationError for t <= 0 or size mismatch.
  void apply(double t, double g, std::span<const cplx> in, std::span<cplx> out) const;
  /// out = sum_{j != k} s_j^+ s_k^- in.
  void apply_hopping(std::span<const cplx> in, std::span<cplx> out) const;

  [[nodiscard]] HermitianOperator at(double t, double g) const;
  [[nodiscard]] Eigen::MatrixXd dense(double t, double g) const;

 private:
  DrivenHamiltonian(ModelKind kind, std::shared_ptr<const SpinSector> sector, std::vector<double> diagonal);

  ModelKind kind_;
  std::shared_ptr<const SpinSector> sector_;
  std::vector<double> diagonal_;
  std::shared_ptr<const PairHopping> hopping_;
};

/// Convenience forms that build the operator and apply it once.
std::vector<cplx> apply_bcs(double t, double g, const EnergyLevels& levels, const SpinSector& sector,
                            std::span<const cplx> v);
std::vector<cplx> apply_three_body(double t, double g, const ThreeBodyCouplings& couplings, const SpinSector& sector,
                                   std::span<const cplx> v);

/// Gaudin operator H_j = t s_j^z - 2g sum_{k != j} (s_j . s_k)/(eps_j - eps_k)
/// for 0-based spin `j`. These commute with the BCS Hamiltonian at the same t.
HermitianOperator build_gaudin(int j, double t, double g, const EnergyLevels& levels, const SpinSector& sector);

/// s_j^z as a diagonal operator (= d H_BCS / d eps_j = d H_j / d t).
HermitianOperator spin_z_operator(int j, const SpinSector& sector);

/// Max-norm residuals of the integrability identities at one (t, g):
/// [H_BCS, H_j], [H_i, H_j], d_{eps_j} H_i - d_{eps_i} H_j and
/// d_{eps_j} H_BCS - d_t H_j, each maximized over spins. Derivatives are
/// central differences with step `fd_step`.
struct IntegrabilityResiduals {
  double bcs_commutator = 0.0;
  double gaudin_commutator = 0.0;
  double compatibility = 0.0;
  double time_derivative = 0.0;
};

IntegrabilityResiduals integrability_residuals(const EnergyLevels& levels, const SpinSector& sector, double t,
                                               double g, double fd_step = 1e-5);

}  // namespace qanneal
