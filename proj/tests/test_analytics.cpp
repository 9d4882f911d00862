#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qanneal/analytics.hpp"
#include "qanneal/error.hpp"
#include "qanneal/eta_markov.hpp"
#include "qanneal/gibbs.hpp"
#include "qanneal/levels.hpp"

using namespace qanneal;

namespace {

constexpr double kPi = std::numbers::pi;

// Exact N -> infinity entropy of the Gibbs law, summed factor by factor:
// sum_k [-log(1 - x^k) + 2 pi g k x^k / (1 - x^k)].
double entropy_limit(double g) {
  const double x = std::exp(-2.0 * kPi * g);
  double s = 0.0;
  for (int k = 1; k < 100000; ++k) {
    const double xk = std::pow(x, k);
    const double term = -std::log1p(-xk) + 2.0 * kPi * g * k * xk / (1.0 - xk);
    s += term;
    if (term < 1e-18 * s) break;
  }
  return s;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

}  // namespace

TEST_CASE("mean accuracy approximation") {
  CHECK(mean_eta_approx(0.0, 100) == 0.0);
  // Direct evaluation where exp(pi g N) is representable.
  for (double u : {0.1, 1.0, 5.0, 40.0}) {
    const int n = 200;
    const double g = u / (kPi * n);
    CHECK(mean_eta_approx(g, n) == doctest::Approx(2.0 / u * std::log((1.0 + std::exp(u)) / 2.0) - 1.0).epsilon(1e-12));
  }
  CHECK(mean_eta_approx(1.0, 4000) == doctest::Approx(1.0 - 2.0 * std::numbers::ln2 / (kPi * 4000)).epsilon(1e-14));
  CHECK(std::isfinite(mean_eta_approx(10.0, 4000)));
  double prev = -1.0;
  for (double g = 0.0; g < 2.0; g += 0.01) {
    const double m = mean_eta_approx(g, 100);
    CHECK(m >= prev);
    CHECK(m >= 0.0);
    CHECK(m < 1.0);
    prev = m;
  }
  CHECK(mean_eta_approx(0.01, 200) < mean_eta_approx(0.01, 400));
}

TEST_CASE("wrong spins at small g approach log 2/(pi g)") {
  const int n = 200000;
  const double g = 0.01;
  CHECK(n * (1.0 - mean_eta_approx(g, n)) / 2.0 == doctest::Approx(std::numbers::ln2 / (kPi * g)).epsilon(1e-9));
}

TEST_CASE("required coupling inverts the asymptote") {
  const RequiredCoupling r = required_g(0.9, 1000);
  CHECK(std::abs(mean_eta_approx(r.g, 1000) - 0.9) < 1e-3);
  CHECK(r.in_validity_window);
  CHECK(required_g(0.99, 1000).g > required_g(0.9, 1000).g);
  CHECK(required_g(0.9, 100000).g < required_g(0.9, 1000).g);
  CHECK_FALSE(required_g(0.999, 10).in_validity_window);
  CHECK_FALSE(required_g(0.1, 1000).in_validity_window);
  CHECK_THROWS_AS(required_g(1.0, 100), ValidationError);
  CHECK_THROWS_AS(required_g(0.0, 100), ValidationError);
}

TEST_CASE("variance approximation") {
  CHECK(var_eta_approx(0.0, 100) == doctest::Approx(0.01));
  CHECK(var_eta_approx(1e-9, 100) == doctest::Approx(0.01).epsilon(1e-6));
  CHECK(var_eta_approx(5.0, 1000) == doctest::Approx(2.0 / (kPi * 5.0 * 1e6)).epsilon(1e-12));
  for (double g : {0.001, 0.01, 0.1}) {
    const int n = 300;
    const double u = kPi * g * n;
    const double direct = 4.0 / (kPi * g * n * n) * (1.0 / (1.0 + std::exp(-u)) - 0.5);
    CHECK(var_eta_approx(g, n) == doctest::Approx(direct).epsilon(1e-12));
    CHECK(var_eta_approx(g, n) > 0.0);
  }
}

TEST_CASE("grand-canonical marginals") {
  const int n = 12;
  for (int j = 1; j <= n; ++j) CHECK(marginal_gc(0.3, n, j) == doctest::Approx(-marginal_gc(0.3, n, n + 1 - j)));
  for (int j = 1; j <= n; ++j) CHECK(marginal_gc(100.0, n, j) == doctest::Approx(j <= n / 2 ? 0.5 : -0.5));
  CHECK_THROWS_AS(marginal_gc(0.1, n, 0), ValidationError);

  for (double g : {0.01, 0.05, 0.1}) {
    const std::vector<double> exact = marginal_polarizations(GibbsLaw(n, 0, g));
    for (int j = 1; j <= n; ++j) CHECK(std::abs(marginal_gc(g, n, j) - exact[j - 1]) < 0.05);
  }
  // For gN >~ 2 the fixed magnetization pins the four spins nearest the
  // midpoint harder than the grand-canonical profile; the rest still agree.
  for (double g : {0.2, 0.5, 1.0}) {
    const std::vector<double> exact = marginal_polarizations(GibbsLaw(n, 0, g));
    for (int j = 1; j <= n; ++j) {
      if (std::abs(2 * j - (n + 1)) <= 3) continue;
      CHECK(std::abs(marginal_gc(g, n, j) - exact[j - 1]) < 0.05);
    }
    MESSAGE("g=" << g << " central-spin deviation " << std::abs(marginal_gc(g, n, n / 2) - exact[n / 2 - 1]));
  }
}

TEST_CASE("entropy via the partition function equals direct enumeration") {
  for (int n = 2; n <= 12; n += 2) {
    const SpinSector s = build_sector(n, 0);
    for (double g : {0.04, 0.1, 0.2}) {
      CHECK(std::abs(entropy_partition(g, n) - entropy_direct(GibbsLaw(n, 0, g), s)) < 1e-6);
    }
  }
  for (int n : {4, 10, 40}) CHECK(entropy_partition(1e-9, n) == doctest::Approx(std::log(binomial(n, n / 2))).epsilon(1e-7));
}

TEST_CASE("analytic g-derivative matches finite differences") {
  for (int n : {12, 100, 800}) {
    for (double g : {0.005, 0.04, 0.3}) {
      const double h = 1e-5 * g;
      const double fd = g * (log_partition(g + h, n) - log_partition(g - h, n)) / (2.0 * h);
      const double analytic = log_partition(g, n) - entropy_partition(g, n);
      CHECK(rel(fd, analytic) < 1e-7);
    }
  }
}

TEST_CASE("entropy decreases with g") {
  for (int n : {12, 200}) {
    double prev = 1e300;
    for (double g = 0.001; g < 2.0; g *= 1.2) {
      const double s = entropy_partition(g, n);
      CHECK(s <= prev);
      prev = s;
    }
  }
}

TEST_CASE("entropy at fixed gN grows linearly in N") {
  for (double gn : {0.5, 1.0, 2.0, 5.0}) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    int count = 0;
    for (int n = 100; n <= 800; n += 100) {
      const double s = entropy_partition(gn / n, n);
      sx += n;
      sy += s;
      sxx += double(n) * n;
      sxy += n * s;
      syy += s * s;
      ++count;
    }
    const double cov = sxy - sx * sy / count;
    const double r2 = cov * cov / ((sxx - sx * sx / count) * (syy - sy * sy / count));
    CHECK(r2 > 0.999);
  }
}

TEST_CASE("fixed-g entropy saturates at the exact infinite-N limit") {
  // Reference limits from a 30-digit evaluation of the same series.
  CHECK(entropy_limit(0.2) == doctest::Approx(1.31327492177375328).epsilon(1e-13));
  CHECK(entropy_limit(0.04) == doctest::Approx(10.9805314775233712).epsilon(1e-13));
  for (double g : {0.04, 0.1, 0.2, 1.0}) {
    CHECK(std::abs(entropy_partition(g, 400) - entropy_limit(g)) < 1e-10 * entropy_limit(g));
    CHECK(std::abs(entropy_partition(g, 200) - entropy_partition(g, 400)) < 0.01 * entropy_saturation(g));
  }
}

TEST_CASE("saturation closed form is the small-g continuum limit") {
  CHECK(rel(entropy_saturation(0.005), entropy_limit(0.005)) < 1e-3);
  CHECK(rel(entropy_saturation(0.01), entropy_limit(0.01)) < 2e-3);
  // Away from g -> 0 the continuum form overshoots the exact sum: about 2%
  // at g = 0.1 and 5% at g = 0.2.
  const double at_02 = (entropy_saturation(0.2) - entropy_limit(0.2)) / entropy_limit(0.2);
  CHECK(at_02 == doctest::Approx(0.0530).epsilon(0.01));
  MESSAGE("continuum form vs exact limit at g=0.2: " << at_02);
}

TEST_CASE("saturation closed form asymptotics") {
  for (double g : {4.0, 6.0}) {
    const double a = kPi * g;
    CHECK(entropy_saturation(g) == doctest::Approx(std::exp(-a) * (1.0 / a + 0.5)).epsilon(1e-5));
  }
  CHECK(entropy_saturation(1e-5) == doctest::Approx(kPi / (6.0 * 1e-5)).epsilon(1e-3));
  CHECK_THROWS_AS(entropy_saturation(0.0), ValidationError);
}

TEST_CASE("temperature") {
  CHECK(temperature(2.0 * kPi * 0.3, 0.3) == doctest::Approx(1.0));
  CHECK(temperature(0.1, 1e6) < 1e-7);
  for (double g : {0.01, 0.2, 1.5}) {
    const double eps = 0.37;
    CHECK(std::exp(-eps / temperature(eps, g)) == doctest::Approx(std::exp(-2.0 * kPi * g)).epsilon(1e-14));
  }
  CHECK(temperature(EnergyLevels::equidistant(8, 0.5), 0.1) == doctest::Approx(0.5 / (2.0 * kPi * 0.1)));
  CHECK_THROWS_AS(temperature(generate_levels(8, 7), 0.1), ValidationError);
}

TEST_CASE("Landau-Zener baseline") {
  const LZBaseline a = lz_baseline(1.0, generate_levels(12, 7));
  const LZBaseline b = lz_baseline(1.0, EnergyLevels::equidistant(12, 0.3));
  CHECK(a.estimate == b.estimate);
  CHECK(a.gap == generate_levels(12, 7).min_spacing());
  CHECK(a.rate == doctest::Approx(a.gap * a.gap));
  CHECK(a.effective_time == doctest::Approx(1.0 / a.gap));
  CHECK(a.estimate == doctest::Approx(0.99813).epsilon(1e-5));
  CHECK(std::abs(a.estimate - ground_prob_infinite(1.0)) < 2e-3);
  CHECK(lz_baseline(0.0, generate_levels(4, 1)).estimate == 0.0);
}

TEST_CASE("Gaussian approximation of P(eta)") {
  const int n = 600;
  for (double g : {0.005, 0.01, 0.02}) {
    const EtaDistribution d = eta_distribution(GibbsLaw(n, 0, g));
    const GaussianEta gauss = gaussian_eta(g, n);
    const auto peak = std::max_element(d.probs.begin(), d.probs.end()) - d.probs.begin();
    CHECK(std::abs(d.support[peak] - gauss.mean) <= 4.0 / n);
    CHECK(gauss.variance > 0.0);
    CHECK(rel(d.mean, gauss.mean) < 0.05);
    CHECK(rel(d.variance, gauss.variance) < 0.05);
    // Density integrates to one on the eta grid.
    double mass = 0.0;
    for (double eta : d.support) mass += gauss.density(eta) * 4.0 / n;
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-3));
  }
  const EtaDistribution small = eta_distribution(GibbsLaw(8, 0, 0.1));
  MESSAGE("N=8 mean: exact " << small.mean << ", Gaussian " << gaussian_eta(0.1, 8).mean);
}
