#pragma once

#include <optional>

namespace qanneal {

/// Dilogarithm Li_2(z) = sum_{k >= 1} z^k / k^2 for z in [0, 1].
///
/// The power series is summed directly for z <= 1/2; above that the reflection
/// Li_2(z) = pi^2/6 - ln(z) ln(1-z) - Li_2(1-z) keeps the series argument small.
double polylog2(double z);

/// q-Pochhammer symbol (a; q)_k = prod_{i=0}^{k-1} (1 - a q^i).
/// With `k` = nullopt the infinite product is returned (requires |q| < 1); it is
/// truncated once a factor differs from 1 by less than 1e-16 relative.
double q_pochhammer(double a, double q, std::optional<long> k);

}  // namespace qanneal
