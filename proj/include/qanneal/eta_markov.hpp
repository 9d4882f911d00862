#pragma once

#include <vector>

#include "qanneal/gibbs.hpp"

namespace qanneal {

inline constexpr int kMarkovMaxSpins = 10'000;

/// Law of the accuracy eta on the grid {-1, -1 + 4/N, ..., 1}.
struct EtaDistribution {
  int n = 0;
  double g = 0.0;
  std::vector<double> support;  ///< ascending eta values
  std::vector<double> probs;
  double mean = 0.0;
  double variance = 0.0;
};

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

/// Diagnostics of one recursion pass.
struct MarkovDiagnostics {
  double max_conservation_error = 0.0;  ///< max over steps of |sum_m q_{j,m} - 1|
  int steps = 0;
};

/// O(N^2) recursion over the imbalance of the already-fixed spins, run from
/// spin N down to spin N/2 + 1. Requires two_sz = 0 and even N <= 10^4.
EtaDistribution eta_distribution(const GibbsLaw& law, MarkovDiagnostics* diagnostics = nullptr);

/// <s_j^z> for j = 1..N from the same recursion carried down to spin 1.
std::vector<double> marginal_polarizations(const GibbsLaw& law, MarkovDiagnostics* diagnostics = nullptr);

Moments moments(const EtaDistribution& dist);

}  // namespace qanneal
