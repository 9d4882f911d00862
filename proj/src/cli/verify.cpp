#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <memory>
#include <sstream>

#include "cli/cli.hpp"
#include "qanneal/analytics.hpp"
#include "qanneal/eta_markov.hpp"
#include "qanneal/gibbs.hpp"
#include "qanneal/propagator.hpp"
#include "qanneal/qgroup.hpp"
#include "qanneal/spectrum.hpp"

namespace qanneal::cli {

namespace {

struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::string detail;
};

// value <= threshold passes; NaN never passes.
Check bound(std::string name, double value, double threshold, std::string detail = {}) {
  return {std::move(name), value, threshold, value <= threshold, std::move(detail)};
}

double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

std::vector<bool> spins_of(Microstate ms, int n) {
  std::vector<bool> up(n);
  for (int j = 0; j < n; ++j) up[j] = ms.up(j);
  return up;
}

Check hermiticity() {
  const int n = 6;
  auto sector = std::make_shared<const SpinSector>(build_sector(n, 0));
  double worst = 0.0;
  for (double t : {0.01, 1.0, 100.0}) {
    const Eigen::MatrixXd bcs = DrivenHamiltonian::bcs(sector, generate_levels(n, 7)).dense(t, 0.5);
    const Eigen::MatrixXd tb =
        DrivenHamiltonian::three_body(sector, generate_three_body_couplings(n, 0.1, 7)).dense(t, 0.5);
    worst = std::max({worst, (bcs - bcs.transpose()).cwiseAbs().maxCoeff(), (tb - tb.transpose()).cwiseAbs().maxCoeff()});
  }
  return bound("hamiltonian_hermiticity", worst, 1e-14, "N=6, both models, t in {0.01, 1, 100}");
}

std::vector<Check> integrability() {
  const int n = 6;
  const SpinSector sector = build_sector(n, 0);
  const EnergyLevels levels = generate_levels(n, 7);
  IntegrabilityResiduals worst;
  for (double t : {0.5, 1.0, 5.0}) {
    const IntegrabilityResiduals r = integrability_residuals(levels, sector, t, 0.3);
    worst.bcs_commutator = std::max(worst.bcs_commutator, r.bcs_commutator);
    worst.gaudin_commutator = std::max(worst.gaudin_commutator, r.gaudin_commutator);
    worst.compatibility = std::max(worst.compatibility, r.compatibility);
    worst.time_derivative = std::max(worst.time_derivative, r.time_derivative);
  }
  const std::string where = "N=6, seed 7, g=0.3, t in {0.5, 1, 5}";
  return {bound("gaudin_commutes_with_bcs", worst.bcs_commutator, 1e-10, where),
          bound("gaudin_mutual_commutation", worst.gaudin_commutator, 1e-10, where),
          bound("gaudin_compatibility", worst.compatibility, 1e-8, where + ", central differences"),
          bound("gaudin_time_vs_level_derivative", worst.time_derivative, 1e-8, where + ", central differences")};
}

Check oracle_equivalence(bool perturb) {
  // Mutation hook: flipping the sign of the exponent in p- must break the gate.
  const LogFactorFn factor = [perturb](int m, int n, bool down, const GibbsLaw& law) {
    if (!down) return log_p_plus(m, n, law);
    if (!perturb) return log_p_minus(m, n, law);
    const int d = (n - m) / 2;
    if (d <= 0) return -std::numeric_limits<double>::infinity();
    if (d >= n || law.g() == 0.0) return log_p_minus(m, n, law);
    return std::log(std::expm1(-d * law.log_x()) / std::expm1(-n * law.log_x()));
  };
  double worst = 0.0;
  for (int n = 2; n <= 10; ++n) {
    for (int two_sz = -(n % 2 == 0 ? 2 : 1); two_sz <= (n % 2 == 0 ? 2 : 1); two_sz += 2) {
      if (std::abs(two_sz) > n) continue;
      const SpinSector sector = build_sector(n, two_sz);
      for (double g : {0.0, 0.05, 0.3, 1.0}) {
        const GibbsLaw law(n, two_sz, g);
        const std::vector<double> exact = enumerate_distribution(law, sector);
        for (std::size_t i = 0; i < sector.dimension(); ++i) {
          const double p = microstate_prob_with(law, spins_of(sector[i], n), factor).probability;
          worst = std::max(worst, rel_diff(p, exact[i]));
        }
      }
    }
  }
  return bound("product_form_vs_enumeration", worst, 1e-10,
               std::string("N=2..10, two_sz near 0, g in {0, 0.05, 0.3, 1}") + (perturb ? ", p- PERTURBED" : ""));
}

Check closed_forms() {
  double worst = 0.0;
  for (double g : {0.01, 0.1, 0.5, 1.0}) {
    const double x = std::exp(-2.0 * std::numbers::pi * g);
    const GibbsLaw l2(2, 0, g), l4(4, 0, g);
    worst = std::max(worst, std::abs(microstate_prob(l2, Microstate{0b01}).probability - 1.0 / (1.0 + x)));
    worst = std::max(worst, std::abs(microstate_prob(l4, Microstate{0b0011}).probability -
                                     1.0 / ((1.0 + x * x) * (1.0 + x + x * x))));
  }
  return bound("hand_derived_closed_forms", worst, 1e-12, "N=2: 1/(1+x); N=4: 1/((1+x^2)(1+x+x^2))");
}

Check markov_equivalence() {
  double worst = 0.0;
  for (int n = 2; n <= 10; n += 2) {
    const SpinSector sector = build_sector(n, 0);
    for (double g : {0.0, 0.05, 0.3, 1.0}) {
      const GibbsLaw law(n, 0, g);
      const std::vector<double> exact = enumerate_distribution(law, sector);
      const EtaDistribution d = eta_distribution(law);
      std::vector<double> by_eta(d.support.size(), 0.0);
      std::vector<double> pol(n, 0.0);
      for (std::size_t i = 0; i < exact.size(); ++i) {
        const double eta = eta_of(sector[i], n);
        const auto k = static_cast<std::size_t>(std::lround((eta + 1.0) * n / 4.0));
        by_eta.at(k) += exact[i];
        for (int j = 0; j < n; ++j) pol[j] += exact[i] * sector[i].sz(j);
      }
      for (std::size_t k = 0; k < by_eta.size(); ++k) worst = std::max(worst, std::abs(by_eta[k] - d.probs[k]));
      const std::vector<double> m = marginal_polarizations(law);
      for (int j = 0; j < n; ++j) worst = std::max(worst, std::abs(m[j] - pol[j]));
    }
  }
  return bound("markov_chain_vs_enumeration", worst, 1e-10, "N=2..10 even, eta law and marginals");
}

std::vector<Check> dynamics() {
  const int n = 6;
  const double g = 0.2;
  auto sector = std::make_shared<const SpinSector>(build_sector(n, 0));
  const DrivenHamiltonian h = DrivenHamiltonian::bcs(sector, generate_levels(n, 7));
  const EvolutionResult r = propagate(h, g, {});
  const std::vector<double> exact = enumerate_distribution(GibbsLaw(n, 0, g), *sector);
  double max_abs = 0.0;
  for (std::size_t i = 0; i < exact.size(); ++i) max_abs = std::max(max_abs, std::abs(r.final_probs[i] - exact[i]));
  const double x = std::exp(-2.0 * std::numbers::pi * g);
  double worst_ratio = 0.0;
  int pairs = 0;
  for (const auto& [a, b] : adjacent_flip_pairs(*sector)) {
    const std::size_t hi = exact[a] > exact[b] ? a : b;
    const std::size_t lo = hi == a ? b : a;
    if (exact[lo] < 1e-4) continue;
    ++pairs;
    worst_ratio = std::max(worst_ratio, std::abs(r.adiabatic_probs[lo] / r.adiabatic_probs[hi] / x - 1.0));
  }
  std::ostringstream d;
  d << "N=6, g=0.2, seed 7; " << pairs << " adjacent pairs, eigenbasis populations at t1";
  return {bound("schrodinger_vs_gibbs", max_abs, 1e-2, "N=6, g=0.2, max |P_sim - P_gibbs|"),
          bound("detailed_balance", worst_ratio, 0.02, d.str()),
          bound("norm_drift", r.norm_drift, 1e-8, "N=6, g=0.2, tol 1e-8")};
}

std::vector<Check> quantum_group() {
  double ybz = 0.0, eig = 0.0;
  for (double q : log_spaced(1e-2, 1e2, 100)) {
    const QGroupReport r = qgroup_report(q);
    ybz = std::max(ybz, r.ybz_residual);
    eig = std::max(eig, r.max_eigenvalue_error);
  }
  return {bound("yang_baxter_residual", ybz, 1e-12, "100 log-spaced q in [1e-2, 1e2]"),
          bound("sigma_eigenvalues", eig, 1e-12, "{-q^-3/2, sqrt q x3}")};
}

Check entropy_routes() {
  double worst = 0.0;
  for (int n = 2; n <= 10; n += 2) {
    const SpinSector sector = build_sector(n, 0);
    for (double g : {0.04, 0.1, 0.2}) {
      worst = std::max(worst, std::abs(entropy_partition(g, n) - entropy_direct(GibbsLaw(n, 0, g), sector)));
    }
  }
  return bound("entropy_partition_vs_direct", worst, 1e-6, "N=2..10, g in {0.04, 0.1, 0.2}");
}

}  // namespace

Output run_verify(const RunConfig& config) {
  std::vector<Check> checks;
  auto append = [&](std::vector<Check> more) { checks.insert(checks.end(), more.begin(), more.end()); };
  checks.push_back(hermiticity());
  append(integrability());
  checks.push_back(oracle_equivalence(config.perturb_p_minus));
  checks.push_back(closed_forms());
  checks.push_back(markov_equivalence());
  checks.push_back(entropy_routes());
  append(quantum_group());
  append(dynamics());

  Output out;
  const bool all = std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
  out.exit_code = all ? 0 : 4;
  if (config.format == Format::json) {
    json arr = json::array();
    for (const auto& c : checks) {
      arr.push_back({{"check", c.name}, {"pass", c.pass}, {"value", c.value}, {"threshold", c.threshold},
                     {"detail", c.detail}});
    }
    out.primary = json{{"pass", all}, {"checks", arr}}.dump(2) + "\n";
  } else if (config.format == Format::csv) {
    Table t{{"check", "pass", "value", "threshold", "detail"}, {}};
    for (const auto& c : checks) t.add({c.name, static_cast<long long>(c.pass), c.value, c.threshold, c.detail});
    out.primary = t.to_csv();
  } else {
    std::ostringstream os;
    for (const auto& c : checks) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "value=%.6g threshold=%g", c.value, c.threshold);
      os << (c.pass ? "PASS " : "FAIL ") << c.name << "  " << buf << "  (" << c.detail << ")\n";
    }
    os << (all ? "all checks passed\n" : "VERIFY FAILED\n");
    out.primary = os.str();
  }
  return out;
}

}  // namespace qanneal::cli
