#include "qanneal/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qanneal/error.hpp"

namespace qanneal {

std::string to_string(ModelKind kind) {
  return kind == ModelKind::bcs ? "bcs" : "three-body";
}

ThreeBodyCouplings generate_three_body_couplings(int n, double variance, std::uint64_t seed) {
  if (n < 3) throw ValidationError("the three-body model needs at least three spins");
  if (!(variance >= 0.0)) throw ValidationError("coupling variance must be nonnegative");
  Engine engine = make_engine(seed);
  ThreeBodyCouplings c;
  c.variance = variance;
  c.seed = seed;
  c.J.resize(n);
  const double sd = std::sqrt(variance);
  for (double& j : c.J) j = sd * standard_normal(engine);
  return c;
}

double three_body_energy(const ThreeBodyCouplings& couplings, Microstate ms, int n_spins) {
  // With a_i = J_i s_i the ordered sum over distinct (i, j, k) equals
  // p1^3 - 3 p1 p2 + 2 p3 where p_r = sum_i a_i^r (Newton's identities).
  double p1 = 0.0, p2 = 0.0, p3 = 0.0;
  for (int i = 0; i < n_spins; ++i) {
    const double a = couplings.J[i] * ms.sz(i);
    p1 += a;
    p2 += a * a;
    p3 += a * a * a;
  }
  return p1 * p1 * p1 - 3.0 * p1 * p2 + 2.0 * p3;
}

Eigen::MatrixXd HermitianOperator::dense() const {
  const auto n = static_cast<Eigen::Index>(diagonal.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = diagonal[i];
  for (const Entry& e : upper) {
    m(e.row, e.col) += e.value;
    m(e.col, e.row) += e.value;
  }
  return m;
}

PairHopping::PairHopping(const SpinSector& sector) {
  if (sector.dimension() > std::numeric_limits<std::uint32_t>::max()) {
    throw CapacityError("sector too large for the hopping table");
  }
  const int n = sector.n_spins();
  row_start_.reserve(sector.dimension() + 1);
  cols_.reserve(sector.dimension() * static_cast<std::size_t>(sector.n_up()) * sector.n_down());
  row_start_.push_back(0);
  std::vector<std::uint32_t> row;
  for (const Microstate ms : sector.basis()) {
    row.clear();
    for (int up = 0; up < n; ++up) {
      if (!ms.up(up)) continue;
      for (int down = 0; down < n; ++down) {
        if (ms.up(down)) continue;
        const Microstate moved{ms.bits ^ (1ULL << up) ^ (1ULL << down)};
        row.push_back(static_cast<std::uint32_t>(*sector.index_of(moved)));
      }
    }
    std::sort(row.begin(), row.end());
    cols_.insert(cols_.end(), row.begin(), row.end());
    row_start_.push_back(cols_.size());
  }
}

DrivenHamiltonian::DrivenHamiltonian(ModelKind kind, std::shared_ptr<const SpinSector> sector,
                                     std::vector<double> diagonal)
    : kind_(kind),
      sector_(std::move(sector)),
      diagonal_(std::move(diagonal)),
      hopping_(std::make_shared<const PairHopping>(*sector_)) {}

DrivenHamiltonian DrivenHamiltonian::bcs(std::shared_ptr<const SpinSector> sector, const EnergyLevels& levels) {
  if (!sector) throw ValidationError("null sector");
  const int n = sector->n_spins();
  if (static_cast<int>(levels.size()) != n) {
    throw ValidationError("expected " + std::to_string(n) + " energy levels, got " + std::to_string(levels.size()));
  }
  std::vector<double> diag(sector->dimension());
  for (std::size_t i = 0; i < diag.size(); ++i) {
    const Microstate ms = (*sector)[i];
    double e = 0.0;
    for (int j = 0; j < n; ++j) e += levels[j] * ms.sz(j);
    diag[i] = e;
  }
  return DrivenHamiltonian(ModelKind::bcs, std::move(sector), std::move(diag));
}

DrivenHamiltonian DrivenHamiltonian::three_body(std::shared_ptr<const SpinSector> sector,
                                                const ThreeBodyCouplings& couplings) {
  if (!sector) throw ValidationError("null sector");
  const int n = sector->n_spins();
  if (static_cast<int>(couplings.J.size()) != n) {
    throw ValidationError("expected " + std::to_string(n) + " three-body factors, got " +
                          std::to_string(couplings.J.size()));
  }
  std::vector<double> diag(sector->dimension());
  for (std::size_t i = 0; i < diag.size(); ++i) diag[i] = three_body_energy(couplings, (*sector)[i], n);
  return DrivenHamiltonian(ModelKind::three_body, std::move(sector), std::move(diag));
}

namespace {

double hopping_amplitude(double t, double g) {
  if (!(t > 0.0)) throw ValidationError("time must be positive (the coupling g/t is singular at t <= 0)");
  return -g / t;
}

}  // namespace

void DrivenHamiltonian::apply_hopping(std::span<const cplx> in, std::span<cplx> out) const {
  const std::size_t dim = dimension();
  if (in.size() != dim || out.size() != dim) throw ValidationError("vector size does not match sector dimension");
  for (std::size_t i = 0; i < dim; ++i) {
    cplx acc{0.0, 0.0};
    for (std::uint32_t c : hopping_->row(i)) acc += in[c];
    out[i] = acc;
  }
}

void DrivenHamiltonian::apply(double t, double g, std::span<const cplx> in, std::span<cplx> out) const {
  const double amp = hopping_amplitude(t, g);
  const std::size_t dim = dimension();
  if (in.size() != dim || out.size() != dim) throw ValidationError("vector size does not match sector dimension");
  for (std::size_t i = 0; i < dim; ++i) {
    cplx acc{0.0, 0.0};
    for (std::uint32_t c : hopping_->row(i)) acc += in[c];
    out[i] = diagonal_[i] * in[i] + amp * acc;
  }
}

HermitianOperator DrivenHamiltonian::at(double t, double g) const {
  const double amp = hopping_amplitude(t, g);
  HermitianOperator op;
  op.diagonal = diagonal_;
  if (amp != 0.0) {
    op.upper.reserve(hopping_->nonzeros() / 2);
    for (std::size_t i = 0; i < dimension(); ++i) {
      for (std::uint32_t c : hopping_->row(i)) {
        if (c > i) op.upper.push_back({i, c, amp});
      }
    }
  }
  return op;
}

Eigen::MatrixXd DrivenHamiltonian::dense(double t, double g) const {
  const double amp = hopping_amplitude(t, g);
  const auto dim = static_cast<Eigen::Index>(dimension());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    m(i, i) = diagonal_[i];
    for (std::uint32_t c : hopping_->row(i)) m(i, c) = amp;
  }
  return m;
}

std::vector<cplx> apply_bcs(double t, double g, const EnergyLevels& levels, const SpinSector& sector,
                            std::span<const cplx> v) {
  const auto h = DrivenHamiltonian::bcs(std::make_shared<const SpinSector>(sector), levels);
  std::vector<cplx> out(v.size());
  h.apply(t, g, v, out);
  return out;
}

std::vector<cplx> apply_three_body(double t, double g, const ThreeBodyCouplings& couplings, const SpinSector& sector,
                                   std::span<const cplx> v) {
  const auto h = DrivenHamiltonian::three_body(std::make_shared<const SpinSector>(sector), couplings);
  std::vector<cplx> out(v.size());
  h.apply(t, g, v, out);
  return out;
}

HermitianOperator spin_z_operator(int j, const SpinSector& sector) {
  if (j < 0 || j >= sector.n_spins()) throw ValidationError("spin index out of range");
  HermitianOperator op;
  op.diagonal.reserve(sector.dimension());
  for (const Microstate ms : sector.basis()) op.diagonal.push_back(ms.sz(j));
  return op;
}

HermitianOperator build_gaudin(int j, double t, double g, const EnergyLevels& levels, const SpinSector& sector) {
  const int n = sector.n_spins();
  if (j < 0 || j >= n) throw ValidationError("spin index out of range");
  if (static_cast<int>(levels.size()) != n) throw ValidationError("level count does not match sector size");
  std::vector<double> inv_diff(n, 0.0);
  for (int k = 0; k < n; ++k) {
    if (k == j) continue;
    const double d = levels[j] - levels[k];
    if (d == 0.0) throw ValidationError("degenerate levels: Gaudin operator has a pole at eps_j = eps_k");
    inv_diff[k] = 1.0 / d;
  }

  // s_j . s_k = s_j^z s_k^z + (s_j^+ s_k^- + s_j^- s_k^+)/2; the flip part
  // exchanges antiparallel spins j and k with amplitude 1/2.
  HermitianOperator op;
  op.diagonal.resize(sector.dimension());
  for (std::size_t i = 0; i < sector.dimension(); ++i) {
    const Microstate ms = sector[i];
    const double szj = ms.sz(j);
    double zz = 0.0;
    for (int k = 0; k < n; ++k) {
      if (k != j) zz += szj * ms.sz(k) * inv_diff[k];
    }
    op.diagonal[i] = t * szj - 2.0 * g * zz;
    for (int k = 0; k < n; ++k) {
      if (k == j || ms.up(k) == ms.up(j)) continue;
      const Microstate flipped{ms.bits ^ (1ULL << j) ^ (1ULL << k)};
      const std::size_t col = *sector.index_of(flipped);
      if (col > i) op.upper.push_back({i, col, -g * inv_diff[k]});
    }
  }
  return op;
}

namespace {

double max_abs(const Eigen::MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

EnergyLevels shifted(const EnergyLevels& levels, int j, double delta) {
  std::vector<double> eps = levels.values();
  eps[j] += delta;
  return EnergyLevels::from_values(std::move(eps));
}

}  // namespace

IntegrabilityResiduals integrability_residuals(const EnergyLevels& levels, const SpinSector& sector, double t,
                                               double g, double fd_step) {
  const int n = sector.n_spins();
  if (static_cast<int>(levels.size()) != n) throw ValidationError("level count does not match sector size");
  if (!(fd_step > 0.0)) throw ValidationError("finite-difference step must be positive");
  auto shared = std::make_shared<const SpinSector>(sector);
  const Eigen::MatrixXd h_bcs = DrivenHamiltonian::bcs(shared, levels).dense(t, g);

  std::vector<Eigen::MatrixXd> gaudin;
  gaudin.reserve(n);
  for (int j = 0; j < n; ++j) gaudin.push_back(build_gaudin(j, t, g, levels, sector).dense());

  IntegrabilityResiduals res;
  for (int j = 0; j < n; ++j) {
    res.bcs_commutator = std::max(res.bcs_commutator, max_abs(h_bcs * gaudin[j] - gaudin[j] * h_bcs));
    for (int i = 0; i < j; ++i) {
      res.gaudin_commutator =
          std::max(res.gaudin_commutator, max_abs(gaudin[i] * gaudin[j] - gaudin[j] * gaudin[i]));
    }
  }

  const double h = fd_step;
  for (int j = 0; j < n; ++j) {
    const EnergyLevels up = shifted(levels, j, h);
    const EnergyLevels down = shifted(levels, j, -h);
    // d_{eps_j} H_BCS against d_t H_j
    const Eigen::MatrixXd d_eps_bcs =
        (DrivenHamiltonian::bcs(shared, up).dense(t, g) - DrivenHamiltonian::bcs(shared, down).dense(t, g)) /
        (2.0 * h);
    const Eigen::MatrixXd d_t_gaudin =
        (build_gaudin(j, t + h, g, levels, sector).dense() - build_gaudin(j, t - h, g, levels, sector).dense()) /
        (2.0 * h);
    res.time_derivative = std::max(res.time_derivative, max_abs(d_eps_bcs - d_t_gaudin));
    for (int i = 0; i < n; ++i) {
      if (i == j) continue;
      // d_{eps_j} H_i, compared with d_{eps_i} H_j computed from the (i, j) swap
      const Eigen::MatrixXd d_j_hi =
          (build_gaudin(i, t, g, up, sector).dense() - build_gaudin(i, t, g, down, sector).dense()) / (2.0 * h);
      const EnergyLevels up_i = shifted(levels, i, h);
      const EnergyLevels down_i = shifted(levels, i, -h);
      const Eigen::MatrixXd d_i_hj =
          (build_gaudin(j, t, g, up_i, sector).dense() - build_gaudin(j, t, g, down_i, sector).dense()) / (2.0 * h);
      res.compatibility = std::max(res.compatibility, max_abs(d_j_hi - d_i_hj));
    }
  }
  return res;
}

}  // namespace qanneal
