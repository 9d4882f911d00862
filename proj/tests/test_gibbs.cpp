#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>

#include "qanneal/error.hpp"
#include "qanneal/gibbs.hpp"
#include "qanneal/spin_sector.hpp"

using namespace qanneal;

namespace {

double x_of(double g) { return std::exp(-2.0 * std::numbers::pi * g); }

// Brute force over the sector with weights x^{sum_j j s_j}, normalized.
std::vector<double> oracle(const SpinSector& s, double g) {
  std::vector<double> logw(s.dimension());
  for (std::size_t i = 0; i < logw.size(); ++i) {
    double e = 0.0;
    for (int j = 0; j < s.n_spins(); ++j) e += (j + 1) * s[i].sz(j);
    logw[i] = -2.0 * std::numbers::pi * g * e;
  }
  const double top = *std::max_element(logw.begin(), logw.end());
  double z = 0.0;
  for (double& v : logw) z += (v = std::exp(v - top));
  for (double& v : logw) v /= z;
  return logw;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

}  // namespace

TEST_CASE("forced and limiting p- factors") {
  const GibbsLaw law(4, 0, 0.3);
  CHECK(p_minus(1, 1, law) == 0.0);
  CHECK(p_minus(-1, 1, law) == 1.0);
  CHECK(p_minus(0, 6, GibbsLaw(6, 0, 0.0)) == 0.5);
  CHECK(p_minus(2, 6, GibbsLaw(6, 0, 0.0)) == doctest::Approx(4.0 / 12.0));
  CHECK(p_minus(0, 8, GibbsLaw(8, 0, 20.0)) == doctest::Approx(1.0));
  for (int n = 1; n <= 9; ++n) {
    for (int m = -n; m <= n; m += 2) CHECK(p_minus(m, n, law) + p_plus(m, n, law) == doctest::Approx(1.0));
  }
  CHECK_THROWS_AS(p_minus(0, 0, law), ValidationError);
  CHECK_THROWS_AS(p_minus(1, 4, law), ValidationError);
}

TEST_CASE("p- equals its defining ratio away from the limits") {
  for (double g : {0.01, 0.2, 1.0}) {
    const GibbsLaw law(10, 0, g);
    const double x = x_of(g);
    for (int n = 1; n <= 10; ++n) {
      for (int m = -n; m <= n; m += 2) {
        const double expected = (1.0 - std::pow(x, (n - m) / 2)) / (1.0 - std::pow(x, n));
        CHECK(p_minus(m, n, law) == doctest::Approx(expected).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("hand-derived closed forms") {
  for (double g : {0.0, 0.01, 0.1, 0.5, 1.0}) {
    const double x = x_of(g);
    CHECK(microstate_prob(GibbsLaw(2, 0, g), parse_microstate("↑↓")).probability ==
          doctest::Approx(1.0 / (1.0 + x)).epsilon(1e-12));
    CHECK(microstate_prob(GibbsLaw(4, 0, g), parse_microstate("↑↑↓↓")).probability ==
          doctest::Approx(1.0 / ((1.0 + x * x) * (1.0 + x + x * x))).epsilon(1e-12));
    CHECK(ground_prob(GibbsLaw(2, 0, g)) == doctest::Approx(1.0 / (1.0 + x)).epsilon(1e-12));
    CHECK(ground_prob(GibbsLaw(4, 0, g)) ==
          doctest::Approx(1.0 / (1.0 + x + 2 * x * x + x * x * x + x * x * x * x)).epsilon(1e-12));
  }
}

TEST_CASE("product form equals brute-force enumeration") {
  for (int n = 2; n <= 12; ++n) {
    const int base = n % 2;
    for (int two_sz : {base - 2, base, base + 2}) {
      if (std::abs(two_sz) > n) continue;
      const SpinSector s = build_sector(n, two_sz);
      for (double g : {0.0, 0.05, 0.1, 0.5, 1.0}) {
        const GibbsLaw law(n, two_sz, g);
        const std::vector<double> brute = oracle(s, g);
        const std::vector<double> lib = enumerate_distribution(law, s);
        for (std::size_t i = 0; i < s.dimension(); ++i) {
          CHECK(rel(microstate_prob(law, s[i]).probability, brute[i]) < 1e-10);
          CHECK(rel(lib[i], brute[i]) < 1e-10);
        }
        CHECK(std::accumulate(lib.begin(), lib.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("uniform law at g = 0") {
  const SpinSector s = build_sector(8, 0);
  const GibbsLaw law(8, 0, 0.0);
  for (Microstate ms : s.basis()) CHECK(microstate_prob(law, ms).probability == doctest::Approx(1.0 / 70.0));
  CHECK(entropy_direct(law, s) == doctest::Approx(std::log(70.0)).epsilon(1e-13));
}

TEST_CASE("infeasible microstates are flagged") {
  const MicrostateProbability p = microstate_prob(GibbsLaw(4, 0, 0.2), Microstate{0b0111});
  CHECK_FALSE(p.feasible);
  CHECK(p.probability == 0.0);
  CHECK_THROWS_AS(microstate_prob(GibbsLaw(4, 0, 0.2), Microstate{0b110000}), ValidationError);
}

TEST_CASE("adjacent flip pairs and exact detailed balance") {
  for (int n : {4, 7, 10}) {
    const SpinSector s = build_sector(n, n % 2);
    std::set<std::pair<std::size_t, std::size_t>> brute;
    for (std::size_t i = 0; i < s.dimension(); ++i) {
      for (int j = 0; j + 1 < n; ++j) {
        // Up at j and down at j + 1 swaps to the higher-energy neighbour.
        if (s[i].up(j) && !s[i].up(j + 1)) brute.insert({i, *s.index_of(Microstate{s[i].bits ^ (3ULL << j)})});
      }
    }
    const auto pairs = adjacent_flip_pairs(s);
    CHECK(pairs.size() == brute.size());
    const GibbsLaw law(n, n % 2, 0.37);
    const std::vector<double> p = enumerate_distribution(law, s);
    for (auto [a, b] : pairs) {
      const double lo = std::min(p[a], p[b]);
      const double hi = std::max(p[a], p[b]);
      CHECK(lo / hi == doctest::Approx(law.x()).epsilon(1e-12));
      CHECK((brute.count({a, b}) + brute.count({b, a})) == 1);
    }
  }
}

TEST_CASE("finite-N ground probability") {
  for (double g : {0.05, 0.3, 1.0}) {
    const SpinSector s = build_sector(12, 0);
    const GibbsLaw law(12, 0, g);
    CHECK(rel(ground_prob(law), oracle(s, g)[0]) < 1e-10);
    double previous = 1.0;
    for (int n = 2; n <= 400; n += 2) {
      const double p = ground_prob(GibbsLaw(n, 0, g));
      CHECK(p <= previous * (1.0 + 1e-15));
      previous = p;
    }
    CHECK(previous == doctest::Approx(ground_prob_infinite(g)).epsilon(1e-10));
  }
  CHECK_THROWS_AS(ground_prob(GibbsLaw(6, 2, 0.1)), ValidationError);
}

TEST_CASE("infinite-N ground probability against frozen high-precision values") {
  // Reference values from a 30-digit evaluation of prod_k (1 - x^k).
  CHECK(ground_prob_infinite(1.0) == doctest::Approx(0.998129069925958513).epsilon(1e-13));
  CHECK(ground_prob_infinite(0.5) == doctest::Approx(0.954918789987674104).epsilon(1e-13));
  CHECK(ground_prob_infinite(0.2) == doctest::Approx(0.636406285944519318).epsilon(1e-13));
  CHECK(std::abs(ground_prob_infinite(1.0) - (1.0 - x_of(1.0))) < 2e-3);
}

TEST_CASE("large-N microstate probabilities stay in the log domain") {
  const int n = 4000;
  const GibbsLaw law(n, 0, 0.01);
  std::vector<bool> up(n, false);
  std::fill(up.begin(), up.begin() + n / 2, true);
  const MicrostateProbability ground = microstate_prob(law, up);
  CHECK(ground.feasible);
  CHECK(ground.log_probability == doctest::Approx(log_ground_prob(law)).epsilon(1e-10));
  std::swap(up[0], up[n - 1]);
  const MicrostateProbability excited = microstate_prob(law, up);
  CHECK(std::isfinite(excited.log_probability));
  CHECK(excited.log_probability < ground.log_probability);
}

TEST_CASE("entropy of the enumerated law") {
  const SpinSector s = build_sector(10, 0);
  for (double g : {0.04, 0.2, 1.0}) {
    const std::vector<double> p = oracle(s, g);
    double expected = 0.0;
    for (double v : p) expected -= v > 0.0 ? v * std::log(v) : 0.0;
    CHECK(entropy_direct(GibbsLaw(10, 0, g), s) == doctest::Approx(expected).epsilon(1e-12));
  }
  CHECK(entropy_direct(GibbsLaw(10, 0, 50.0), s) < 1e-12);
}

TEST_CASE("enumeration cap and law validation") {
  const SpinSector s = build_sector(12, 0);
  CHECK_THROWS_AS(enumerate_distribution(GibbsLaw(12, 0, 0.1), s, 100), CapacityError);
  CHECK_THROWS_AS(GibbsLaw(4, 1, 0.1), ValidationError);
  CHECK_THROWS_AS(GibbsLaw(4, 0, -0.1), ValidationError);
  CHECK_THROWS_AS(enumerate_distribution(GibbsLaw(10, 0, 0.1), s), ValidationError);
}
