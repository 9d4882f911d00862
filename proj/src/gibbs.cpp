#include "qanneal/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "qanneal/error.hpp"

namespace qanneal {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Number of down spins among the n remaining ones, from n and their summed 2 s^z.
int remaining_down(int m, int n) {
  if (n <= 0) throw ValidationError("p_minus requires n > 0, got " + std::to_string(n));
  if ((n - m) % 2 != 0) {
    throw ValidationError("p_minus requires n - m even (n=" + std::to_string(n) + ", m=" + std::to_string(m) + ")");
  }
  return (n - m) / 2;
}

double log_sum_exp(std::span<const double> v) {
  const double top = *std::max_element(v.begin(), v.end());
  if (top == kNegInf) return kNegInf;
  double acc = 0.0;
  for (double x : v) acc += std::exp(x - top);
  return top + std::log(acc);
}

}  // namespace

GibbsLaw::GibbsLaw(int n, int two_sz, double g) : n_(n), two_sz_(two_sz), g_(g), log_x_(-2.0 * std::numbers::pi * g) {
  if (n < 1) throw ValidationError("number of spins must be positive");
  if ((n + two_sz) % 2 != 0) {
    throw ValidationError("parity mismatch: n + two_sz must be even (n=" + std::to_string(n) +
                          ", two_sz=" + std::to_string(two_sz) + ")");
  }
  if (std::abs(two_sz) > n) throw ValidationError("|two_sz| exceeds n");
  if (!(g >= 0.0) || !std::isfinite(g)) throw ValidationError("coupling g must be finite and nonnegative");
}

double GibbsLaw::x() const noexcept { return std::exp(log_x_); }

double p_minus(int m, int n, const GibbsLaw& law) {
  const int d = remaining_down(m, n);
  if (d <= 0) return 0.0;
  if (d >= n) return 1.0;
  if (law.g() == 0.0) return static_cast<double>(d) / n;
  return std::expm1(d * law.log_x()) / std::expm1(n * law.log_x());
}

double p_plus(int m, int n, const GibbsLaw& law) {
  const int d = remaining_down(m, n);
  if (d <= 0) return 1.0;
  if (d >= n) return 0.0;
  if (law.g() == 0.0) return static_cast<double>(n - d) / n;
  return std::exp(d * law.log_x()) * std::expm1((n - d) * law.log_x()) / std::expm1(n * law.log_x());
}

double log_p_minus(int m, int n, const GibbsLaw& law) {
  const int d = remaining_down(m, n);
  if (d <= 0) return kNegInf;
  if (d >= n) return 0.0;
  if (law.g() == 0.0) return std::log(static_cast<double>(d) / n);
  return std::log(-std::expm1(d * law.log_x())) - std::log(-std::expm1(n * law.log_x()));
}

double log_p_plus(int m, int n, const GibbsLaw& law) {
  const int d = remaining_down(m, n);
  if (d <= 0) return 0.0;
  if (d >= n) return kNegInf;
  if (law.g() == 0.0) return std::log(static_cast<double>(n - d) / n);
  return d * law.log_x() + std::log(-std::expm1((n - d) * law.log_x())) - std::log(-std::expm1(n * law.log_x()));
}

MicrostateProbability microstate_prob_with(const GibbsLaw& law, const std::vector<bool>& up,
                                           const LogFactorFn& log_factor) {
  const int n = law.n();
  if (static_cast<int>(up.size()) != n) {
    throw ValidationError("microstate has " + std::to_string(up.size()) + " spins, law expects " + std::to_string(n));
  }
  const auto n_up = static_cast<int>(std::count(up.begin(), up.end(), true));
  if (2 * n_up - n != law.two_sz()) return {0.0, kNegInf, false};

  // placed = sum over already-fixed spins l > j of 2 s_l^z.
  int placed = 0;
  double log_p = 0.0;
  for (int j = n; j >= 1; --j) {
    const bool spin_up = up[j - 1];
    log_p += log_factor(law.two_sz() - placed, j, !spin_up, law);
    placed += spin_up ? 1 : -1;
  }
  return {std::exp(log_p), log_p, true};
}

MicrostateProbability microstate_prob(const GibbsLaw& law, const std::vector<bool>& up) {
  return microstate_prob_with(law, up, [](int m, int n, bool down, const GibbsLaw& l) {
    return down ? log_p_minus(m, n, l) : log_p_plus(m, n, l);
  });
}

MicrostateProbability microstate_prob(const GibbsLaw& law, Microstate ms) {
  if (law.n() > kMaxSectorSpins) throw ValidationError("bit-encoded microstates hold at most 63 spins");
  if ((ms.bits >> law.n()) != 0) throw ValidationError("microstate has bits beyond spin N");
  std::vector<bool> up(law.n());
  for (int j = 0; j < law.n(); ++j) up[j] = ms.up(j);
  return microstate_prob(law, up);
}

double log_gibbs_weight(const GibbsLaw& law, Microstate ms) {
  double weighted = 0.0;
  for (int j = 0; j < law.n(); ++j) weighted += (j + 1) * ms.sz(j);
  return law.log_x() * weighted;
}

namespace {

std::vector<double> log_probabilities(const GibbsLaw& law, const SpinSector& sector, std::size_t cap) {
  if (sector.n_spins() != law.n() || sector.two_sz() != law.two_sz()) {
    throw ValidationError("sector does not match the Gibbs law");
  }
  if (sector.dimension() > cap) {
    throw CapacityError("sector dimension " + std::to_string(sector.dimension()) + " exceeds enumeration cap " +
                        std::to_string(cap) + "; use the Markov-chain engine (eta-dist) instead");
  }
  std::vector<double> lw(sector.dimension());
  for (std::size_t i = 0; i < lw.size(); ++i) lw[i] = log_gibbs_weight(law, sector[i]);
  const double log_z = log_sum_exp(lw);
  for (double& v : lw) v -= log_z;
  return lw;
}

}  // namespace

std::vector<double> enumerate_distribution(const GibbsLaw& law, const SpinSector& sector, std::size_t cap) {
  std::vector<double> p = log_probabilities(law, sector, cap);
  for (double& v : p) v = std::exp(v);
  return p;
}

double entropy_direct(const GibbsLaw& law, const SpinSector& sector, std::size_t cap) {
  const std::vector<double> lp = log_probabilities(law, sector, cap);
  double s = 0.0;
  for (double v : lp) {
    if (v != kNegInf) s -= std::exp(v) * v;
  }
  return s;
}

double log_ground_prob(const GibbsLaw& law) {
  if (law.two_sz() != 0) throw ValidationError("ground-state probability formula requires two_sz = 0");
  const int k = law.n() / 2;
  double acc = 0.0;
  for (int i = 0; i < k; ++i) {
    const int a = 1 + i;
    const int b = k + 1 + i;
    if (law.g() == 0.0) {
      acc += std::log(static_cast<double>(a) / b);
    } else {
      acc += std::log(-std::expm1(a * law.log_x())) - std::log(-std::expm1(b * law.log_x()));
    }
  }
  return acc;
}

double ground_prob(const GibbsLaw& law) { return std::exp(log_ground_prob(law)); }

double ground_prob_infinite(double g) {
  if (!(g >= 0.0)) throw ValidationError("coupling g must be nonnegative");
  if (g == 0.0) return 0.0;
  const double log_x = -2.0 * std::numbers::pi * g;
  double acc = 0.0;
  for (long i = 1;; ++i) {
    const double term = std::exp(i * log_x);
    acc += std::log1p(-term);
    if (term < 1e-17) break;
  }
  return std::exp(acc);
}

std::vector<std::pair<std::size_t, std::size_t>> adjacent_flip_pairs(const SpinSector& sector) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = 0; a < sector.dimension(); ++a) {
    const Microstate ms = sector[a];
    for (int j = 0; j + 1 < sector.n_spins(); ++j) {
      if (ms.up(j) && !ms.up(j + 1)) {
        const Microstate swapped{ms.bits ^ (3ULL << j)};
        pairs.emplace_back(a, *sector.index_of(swapped));
      }
    }
  }
  return pairs;
}

}  // namespace qanneal
