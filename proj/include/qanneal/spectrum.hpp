#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qanneal/hamiltonian.hpp"

namespace qanneal {

/// Dense diagonalization is refused beyond this sector dimension.
inline constexpr std::size_t kDenseCapacity = 4000;
/// A refined adjacent gap below this is an exact crossing.
inline constexpr double kCrossingThreshold = 1e-8;

enum class GapClass { crossing, avoided };

std::string to_string(GapClass c);

struct GapMinimum {
  std::size_t level = 0;  ///< gap between sorted levels `level` and `level + 1`
  double t_star = 0.0;
  double gap = 0.0;
  GapClass classification = GapClass::avoided;
  bool boundary = false;  ///< minimum sits on the bracket edge (no interior minimum)
};

struct ScanOptions {
  /// Only the lowest `gap_levels` adjacent gaps are searched for minima; nullopt
  /// searches all of them.
  std::optional<std::size_t> gap_levels;
  bool refine = true;
  double crossing_tolerance = kCrossingThreshold;
};

struct SpectrumScan {
  std::vector<double> times;
  std::vector<std::vector<double>> eigenvalues;  ///< [time][level], ascending
  std::vector<GapMinimum> minima;
};

/// `count` points from lo to hi, equally spaced in log t. Endpoints are exact.
std::vector<double> log_spaced(double lo, double hi, std::size_t count);

/// Sorted eigenvalues of H(t). Throws CapacityError above kDenseCapacity.
std::vector<double> eigenvalues_at(const DrivenHamiltonian& h, double t, double g);

/// Eigenvalue curves on `t_grid` plus every interior local minimum of the
/// selected adjacent gaps, refined with `refine_min_gap` on the bracket formed by
/// the two neighbouring grid points.
SpectrumScan spectrum_scan(const DrivenHamiltonian& h, double g, std::span<const double> t_grid,
                           const ScanOptions& options = {});

using SpectrumFunction = std::function<std::vector<double>(double)>;

/// Golden-section search for the minimum of lambda_{level+1}(t) - lambda_level(t)
/// on [t_lo, t_hi]. The result is a crossing iff the refined gap is below
/// `crossing_tolerance`.
GapMinimum refine_min_gap(const SpectrumFunction& spectrum, double t_lo, double t_hi, std::size_t level,
                          double crossing_tolerance = kCrossingThreshold);

GapMinimum refine_min_gap(const DrivenHamiltonian& h, double g, double t_lo, double t_hi, std::size_t level,
                          double crossing_tolerance = kCrossingThreshold);

}  // namespace qanneal
