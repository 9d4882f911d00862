#include "qanneal/special_functions.hpp"

#include <cmath>
#include <numbers>

#include "qanneal/error.hpp"

namespace qanneal {

namespace {

double polylog2_series(double z) {
  double sum = 0.0;
  double power = z;
  for (int k = 1; k < 100000; ++k) {
    const double term = power / (static_cast<double>(k) * k);
    sum += term;
    if (term <= 1e-16 * sum) break;
    power *= z;
  }
  return sum;
}

}  // namespace

double polylog2(double z) {
  if (!(z >= 0.0 && z <= 1.0)) throw ValidationError("polylog2 is implemented for z in [0, 1]");
  if (z == 0.0) return 0.0;
  if (z == 1.0) return std::numbers::pi * std::numbers::pi / 6.0;
  if (z <= 0.5) return polylog2_series(z);
  return std::numbers::pi * std::numbers::pi / 6.0 - std::log(z) * std::log1p(-z) - polylog2_series(1.0 - z);
}

double q_pochhammer(double a, double q, std::optional<long> k) {
  if (k) {
    if (*k < 0) throw ValidationError("q-Pochhammer order must be nonnegative");
    double prod = 1.0;
    double aq = a;
    for (long i = 0; i < *k; ++i) {
      prod *= 1.0 - aq;
      aq *= q;
    }
    return prod;
  }
  if (!(std::abs(q) < 1.0)) throw ValidationError("infinite q-Pochhammer product requires |q| < 1");
  double prod = 1.0;
  double aq = a;
  for (long i = 0; i < 10'000'000; ++i) {
    prod *= 1.0 - aq;
    if (std::abs(aq) < 1e-16 * std::abs(1.0 - aq) || prod == 0.0) return prod;
    aq *= q;
  }
  throw InvariantError("infinite q-Pochhammer product did not converge");
}

}  // namespace qanneal
