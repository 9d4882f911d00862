#pragma once

#include "qanneal/levels.hpp"

namespace qanneal {

/// Grand-canonical estimate of the mean accuracy,
/// (2/(pi g N)) (log(1 + e^{pi g N}) - log 2) - 1, evaluated without overflow.
double mean_eta_approx(double g, int n);

struct RequiredCoupling {
  double g = 0.0;
  /// The inversion uses the g N >> 1 asymptote; trusted for g N >= 3 and g < 1.
  bool in_validity_window = false;
};

/// g = 2 log 2 / (pi N (1 - eta)) for a target mean accuracy eta in (0, 1).
RequiredCoupling required_g(double eta_target, int n);

/// (4/(pi g N^2)) (1/(1 + e^{-pi g N}) - 1/2), with the g -> 0 limit 1/N.
double var_eta_approx(double g, int n);

/// (1/2) tanh(pi g (mu - j)), mu = (N+1)/2, for 1-based spin index j.
double marginal_gc(double g, int n, int j);

/// log Z of the sector Gibbs law with weights exp(-2 pi g sum_j j s_j^z) at
/// two_sz = 0: pi g N^2/4 - log P_G.
double log_partition(double g, int n);

/// S = log Z - g d(log Z)/dg with the derivative taken analytically through the
/// q-Pochhammer factors of P_G.
double entropy_partition(double g, int n);

/// Large-N limit at fixed g: Li_2(e^{-pi g})/(pi g) - (1/2) log(1 - e^{-pi g}).
double entropy_saturation(double g);

/// Effective temperature eps/(2 pi g) in units with k_B = 1.
double temperature(double level_spacing, double g);
/// Same, for a level set. Throws ValidationError unless eps_j = eps * j.
double temperature(const EnergyLevels& levels, double g);

struct LZBaseline {
  double gap = 0.0;             ///< smallest adjacent level spacing
  double rate = 0.0;            ///< gap^2 / g
  double effective_time = 0.0;  ///< g / gap
  double estimate = 0.0;        ///< 1 - exp(-2 pi gap^2 / rate) = 1 - exp(-2 pi g)
};

LZBaseline lz_baseline(double g, const EnergyLevels& levels);

struct GaussianEta {
  double mean = 0.0;
  double variance = 0.0;
  /// Gaussian density at eta.
  [[nodiscard]] double density(double eta) const;
};

GaussianEta gaussian_eta(double g, int n);

}  // namespace qanneal
