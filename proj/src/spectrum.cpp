#include "qanneal/spectrum.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "qanneal/error.hpp"

namespace qanneal {

namespace {
// Golden-section stopping width relative to t. A crossing gap shrinks linearly
// with the bracket, so 1e-10 relative leaves it far below the 1e-8 threshold.
constexpr double kBracketTolerance = 1e-10;
}  // namespace

std::string to_string(GapClass c) { return c == GapClass::crossing ? "crossing" : "avoided"; }

std::vector<double> log_spaced(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi > lo)) throw ValidationError("log-spaced grid needs 0 < lo < hi");
  if (count < 2) throw ValidationError("log-spaced grid needs at least two points");
  std::vector<double> out(count);
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::vector<double> eigenvalues_at(const DrivenHamiltonian& h, double t, double g) {
  if (h.dimension() > kDenseCapacity) {
    throw CapacityError("sector dimension " + std::to_string(h.dimension()) +
                        " exceeds the dense diagonalization cap of " + std::to_string(kDenseCapacity));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h.dense(t, g), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw InvariantError("eigensolver did not converge");
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

GapMinimum refine_min_gap(const SpectrumFunction& spectrum, double t_lo, double t_hi, std::size_t level,
                          double crossing_tolerance) {
  if (!(t_hi > t_lo)) throw ValidationError("refinement bracket must have t_lo < t_hi");
  auto gap = [&](double t) {
    const std::vector<double> ev = spectrum(t);
    if (level + 1 >= ev.size()) throw ValidationError("level index out of range");
    return ev[level + 1] - ev[level];
  };

  constexpr double kInvPhi = 0.6180339887498949;
  double a = t_lo;
  double b = t_hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = gap(c);
  double fd = gap(d);
  for (int iter = 0; iter < 300; ++iter) {
    if (b - a <= kBracketTolerance * std::abs(b)) break;
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = gap(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = gap(d);
    }
  }

  GapMinimum result;
  result.level = level;
  if (fc < fd) {
    result.t_star = c;
    result.gap = fc;
  } else {
    result.t_star = d;
    result.gap = fd;
  }
  const double edge = 1e-6 * (t_hi - t_lo);
  if (result.t_star - t_lo < edge || t_hi - result.t_star < edge) {
    result.boundary = true;
    // The edges themselves may hold a smaller value when the gap is monotone.
    const double g_lo = gap(t_lo);
    const double g_hi = gap(t_hi);
    if (g_lo < result.gap) result = {level, t_lo, g_lo, GapClass::avoided, true};
    if (g_hi < result.gap) result = {level, t_hi, g_hi, GapClass::avoided, true};
  }
  result.classification = result.gap < crossing_tolerance ? GapClass::crossing : GapClass::avoided;
  return result;
}

GapMinimum refine_min_gap(const DrivenHamiltonian& h, double g, double t_lo, double t_hi, std::size_t level,
                          double crossing_tolerance) {
  return refine_min_gap([&](double t) { return eigenvalues_at(h, t, g); }, t_lo, t_hi, level, crossing_tolerance);
}

SpectrumScan spectrum_scan(const DrivenHamiltonian& h, double g, std::span<const double> t_grid,
                           const ScanOptions& options) {
  if (t_grid.size() < 3) throw ValidationError("spectrum scan needs at least three grid times");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0.0)) throw ValidationError("grid times must be positive");
    if (i > 0 && !(t_grid[i] > t_grid[i - 1])) throw ValidationError("grid times must be strictly ascending");
  }
  if (h.dimension() > kDenseCapacity) {
    throw CapacityError("sector dimension " + std::to_string(h.dimension()) +
                        " exceeds the dense diagonalization cap of " + std::to_string(kDenseCapacity));
  }

  SpectrumScan scan;
  scan.times.assign(t_grid.begin(), t_grid.end());
  scan.eigenvalues.reserve(t_grid.size());
  for (double t : t_grid) scan.eigenvalues.push_back(eigenvalues_at(h, t, g));

  const std::size_t n_gaps = h.dimension() - 1;
  const std::size_t levels = std::min(n_gaps, options.gap_levels.value_or(n_gaps));
  for (std::size_t k = 0; k < levels; ++k) {
    for (std::size_t i = 1; i + 1 < t_grid.size(); ++i) {
      const double prev = scan.eigenvalues[i - 1][k + 1] - scan.eigenvalues[i - 1][k];
      const double cur = scan.eigenvalues[i][k + 1] - scan.eigenvalues[i][k];
      const double next = scan.eigenvalues[i + 1][k + 1] - scan.eigenvalues[i + 1][k];
      if (!(cur < prev && cur <= next)) continue;
      if (options.refine) {
        scan.minima.push_back(refine_min_gap(h, g, t_grid[i - 1], t_grid[i + 1], k, options.crossing_tolerance));
      } else {
        scan.minima.push_back({k, t_grid[i], cur,
                               cur < options.crossing_tolerance ? GapClass::crossing : GapClass::avoided, false});
      }
    }
  }
  return scan;
}

}  // namespace qanneal
