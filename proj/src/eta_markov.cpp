#include "qanneal/eta_markov.hpp"

#include <cmath>
#include <numeric>

#include "qanneal/error.hpp"

namespace qanneal {

namespace {

void check_law(const GibbsLaw& law) {
  if (law.two_sz() != 0) throw ValidationError("the Markov-chain engine assumes two_sz = 0");
  if (law.n() % 2 != 0) throw ValidationError("the Markov-chain engine needs an even number of spins");
  if (law.n() > kMarkovMaxSpins) {
    throw CapacityError("N = " + std::to_string(law.n()) + " exceeds the Markov-chain cap of " +
                        std::to_string(kMarkovMaxSpins));
  }
}

// Distribution over u = number of up spins among the spins already fixed
// (spins N, N-1, ..., j+1). Fixing spin j moves u -> u+1 with p_plus and keeps
// u with p_minus, where the remaining j spins must carry 2 s^z = -(2u - placed).
class ImbalanceChain {
 public:
  explicit ImbalanceChain(const GibbsLaw& law) : law_(law), q_{1.0} {}

  [[nodiscard]] int placed() const noexcept { return static_cast<int>(q_.size()) - 1; }
  [[nodiscard]] const std::vector<double>& weights() const noexcept { return q_; }

  /// <s_j^z> for the spin about to be fixed.
  [[nodiscard]] double next_polarization(int j) const {
    double s = 0.0;
    for (int u = 0; u <= placed(); ++u) {
      if (q_[u] == 0.0) continue;
      const int m = law_.two_sz() - (2 * u - placed());
      s += q_[u] * (p_plus(m, j, law_) - p_minus(m, j, law_));
    }
    return 0.5 * s;
  }

  void fix_spin(int j, MarkovDiagnostics* diag) {
    std::vector<double> next(q_.size() + 1, 0.0);
    for (int u = 0; u <= placed(); ++u) {
      if (q_[u] == 0.0) continue;
      const int m = law_.two_sz() - (2 * u - placed());
      next[u + 1] += q_[u] * p_plus(m, j, law_);
      next[u] += q_[u] * p_minus(m, j, law_);
    }
    q_ = std::move(next);
    if (diag != nullptr) {
      const double total = std::accumulate(q_.begin(), q_.end(), 0.0);
      diag->max_conservation_error = std::max(diag->max_conservation_error, std::abs(total - 1.0));
      ++diag->steps;
    }
  }

 private:
  const GibbsLaw& law_;
  std::vector<double> q_;
};

}  // namespace

Moments moments(const EtaDistribution& dist) {
  double mean = 0.0;
  for (std::size_t i = 0; i < dist.support.size(); ++i) mean += dist.probs[i] * dist.support[i];
  double var = 0.0;
  for (std::size_t i = 0; i < dist.support.size(); ++i) {
    const double d = dist.support[i] - mean;
    var += dist.probs[i] * d * d;
  }
  return {mean, var};
}

EtaDistribution eta_distribution(const GibbsLaw& law, MarkovDiagnostics* diagnostics) {
  check_law(law);
  const int n = law.n();
  ImbalanceChain chain(law);
  for (int j = n; j > n / 2; --j) chain.fix_spin(j, diagnostics);

  // Upper half carries imbalance M = 2u - N/2; the lower half carries -M, so
  // eta = -2M/N = 1 - 4u/N. Walking u downwards gives ascending eta.
  EtaDistribution dist;
  dist.n = n;
  dist.g = law.g();
  const int half = n / 2;
  dist.support.reserve(half + 1);
  dist.probs.reserve(half + 1);
  for (int u = half; u >= 0; --u) {
    dist.support.push_back(1.0 - 4.0 * u / n);
    dist.probs.push_back(chain.weights()[u]);
  }
  const Moments m = moments(dist);
  dist.mean = m.mean;
  dist.variance = m.variance;
  return dist;
}

std::vector<double> marginal_polarizations(const GibbsLaw& law, MarkovDiagnostics* diagnostics) {
  check_law(law);
  const int n = law.n();
  std::vector<double> sz(n);
  ImbalanceChain chain(law);
  for (int j = n; j >= 1; --j) {
    sz[j - 1] = chain.next_polarization(j);
    if (j > 1) chain.fix_spin(j, diagnostics);
  }
  return sz;
}

}  // namespace qanneal
