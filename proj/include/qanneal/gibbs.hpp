#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "qanneal/spin_sector.hpp"

namespace qanneal {

inline constexpr std::size_t kEnumerationCap = 2'000'000;

/// Final-state law of the driven BCS model: P({s}) proportional to
/// x^{sum_j j s_j^z} on the sector, with x = exp(-2 pi g).
class GibbsLaw {
 public:
  GibbsLaw(int n, int two_sz, double g);

  [[nodiscard]] int n() const noexcept { return n_; }
  [[nodiscard]] int two_sz() const noexcept { return two_sz_; }
  [[nodiscard]] double g() const noexcept { return g_; }
  /// log x = -2 pi g.
  [[nodiscard]] double log_x() const noexcept { return log_x_; }
  [[nodiscard]] double x() const noexcept;

 private:
  int n_;
  int two_sz_;
  double g_;
  double log_x_;
};

/// Probability that spin n (the highest of n remaining spins, whose summed
/// 2 s^z equals m) ends down: (1 - x^{(n-m)/2}) / (1 - x^n).
/// Forced cases return exactly 0 or 1; g = 0 returns the limit (n-m)/(2n).
double p_minus(int m, int n, const GibbsLaw& law);
double p_plus(int m, int n, const GibbsLaw& law);
/// log p_minus / log p_plus, accurate where the linear values underflow.
double log_p_minus(int m, int n, const GibbsLaw& law);
double log_p_plus(int m, int n, const GibbsLaw& law);

struct MicrostateProbability {
  double probability = 0.0;
  double log_probability = 0.0;
  bool feasible = false;  ///< false when the magnetization does not match the law
};

using LogFactorFn = std::function<double(int m, int n, bool down, const GibbsLaw& law)>;

/// Sequential product form: spins are fixed from j = N down to 1, each with the
/// factor p^{-/+}_{m_j, j} where m_j = 2 (S^z_tot - sum_{l > j} s_l^z).
MicrostateProbability microstate_prob(const GibbsLaw& law, Microstate ms);
/// Same for arbitrary N; `up[j]` is the direction of spin j+1.
MicrostateProbability microstate_prob(const GibbsLaw& law, const std::vector<bool>& up);
/// Product form with a caller-supplied log factor (verification hook).
MicrostateProbability microstate_prob_with(const GibbsLaw& law, const std::vector<bool>& up,
                                           const LogFactorFn& log_factor);

/// log of the unnormalized Gibbs weight, -2 pi g sum_j j s_j^z.
double log_gibbs_weight(const GibbsLaw& law, Microstate ms);

/// Normalized distribution over the sector basis by direct weighting
/// (log-sum-exp normalization). Throws CapacityError beyond `cap` states.
std::vector<double> enumerate_distribution(const GibbsLaw& law, const SpinSector& sector,
                                           std::size_t cap = kEnumerationCap);

/// (x; x)_{N/2} / (x^{N/2+1}; x)_{N/2}. Requires two_sz = 0.
double ground_prob(const GibbsLaw& law);
double log_ground_prob(const GibbsLaw& law);
/// (x; x)_infinity for x = exp(-2 pi g).
double ground_prob_infinite(double g);

/// -sum P log P over the sector, in nats.
double entropy_direct(const GibbsLaw& law, const SpinSector& sector, std::size_t cap = kEnumerationCap);

/// Basis index pairs (a, b) where b is a with spins j, j+1 exchanged and spin j
/// up in a. The Gibbs law gives P(b)/P(a) = x for every pair.
std::vector<std::pair<std::size_t, std::size_t>> adjacent_flip_pairs(const SpinSector& sector);

}  // namespace qanneal
