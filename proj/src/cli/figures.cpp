#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <numeric>

#include "cli/cli.hpp"
#include "qanneal/analytics.hpp"
#include "qanneal/error.hpp"
#include "qanneal/eta_markov.hpp"
#include "qanneal/gibbs.hpp"
#include "qanneal/propagator.hpp"
#include "qanneal/spectrum.hpp"

namespace qanneal::cli {

namespace {

using Rows = Table;

int figure_n(const RunConfig& c, int fallback) { return c.n_given ? c.n : fallback; }

std::vector<double> figure_g(const RunConfig& c, std::vector<double> fallback) {
  return c.g_given ? c.g : std::move(fallback);
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  std::vector<double> v(count);
  for (std::size_t i = 0; i < count; ++i) v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  return v;
}

PropagationOptions propagation_options(const RunConfig& c) {
  PropagationOptions o;
  o.t0 = c.t0;
  o.t1 = c.t1;
  o.tol = c.tol;
  o.samples = c.samples;
  return o;
}

std::vector<EvolutionResult> evolve_sweep(const DrivenHamiltonian& h, const std::vector<double>& gs,
                                          const PropagationOptions& o) {
  return parallel_map<EvolutionResult>(gs.size(), [&](std::size_t i) { return propagate(h, gs[i], o); });
}

// Spectrum curves for the BCS and three-body figures; minima go to a sidecar.
Output spectrum_figure(const RunConfig& c, ModelKind kind, std::vector<double> default_g) {
  RunConfig cfg = c;
  cfg.model = kind;
  const int n = figure_n(c, 12);
  const ModelBundle model = make_model(cfg, n, 0);
  const std::vector<double> gs = figure_g(c, std::move(default_g));
  const std::vector<double> grid = log_spaced(c.t_min, c.t_max, c.points);
  ScanOptions options;
  options.gap_levels = c.gap_levels.value_or(4);
  const auto scans = parallel_map<SpectrumScan>(
      gs.size(), [&](std::size_t i) { return spectrum_scan(model.hamiltonian, gs[i], grid, options); });

  Rows curves{{"g", "t", "level_index", "eigenvalue"}, {}};
  Rows gaps{{"g", "level_index", "t_star", "gap", "classification", "boundary"}, {}};
  for (std::size_t i = 0; i < gs.size(); ++i) {
    for (std::size_t k = 0; k < scans[i].times.size(); ++k) {
      for (std::size_t l = 0; l < scans[i].eigenvalues[k].size(); ++l) {
        curves.add({gs[i], scans[i].times[k], static_cast<long long>(l), scans[i].eigenvalues[k][l]});
      }
    }
    for (const auto& m : scans[i].minima) {
      gaps.add({gs[i], static_cast<long long>(m.level), m.t_star, m.gap, to_string(m.classification),
                static_cast<long long>(m.boundary)});
    }
  }
  Output out;
  out.manifest_extra["model"] = model.description;
  out.manifest_extra["n"] = n;
  if (c.format == Format::json) {
    out.primary = json{{"curves", curves.to_json()}, {"gaps", gaps.to_json()}}.dump(2) + "\n";
  } else {
    out.primary = curves.to_csv();
    out.sidecars.emplace_back(".gaps.csv", gaps.to_csv());
  }
  return out;
}

Output ground_probability_figure(const RunConfig& c) {
  Rows t{{"g", "n", "quantity", "value"}, {}};
  const std::vector<double> gs = linspace(0.02, 1.5, 75);
  for (int n : {4, 8, 12, 16, 24, 48}) {
    for (double g : gs) t.add({g, std::to_string(n), std::string("ground_prob"), ground_prob(GibbsLaw(n, 0, g))});
  }
  for (double g : gs) {
    t.add({g, std::string("inf"), std::string("ground_prob"), ground_prob_infinite(g)});
    t.add({g, std::string("inf"), std::string("lz_estimate"), -std::expm1(-2.0 * std::numbers::pi * g)});
  }
  // Simulated points at the sizes where propagation is quick.
  const std::vector<double> sim_g = figure_g(c, {0.1, 0.2, 0.3, 0.4, 0.6, 0.8, 1.0});
  RunConfig cfg = c;
  cfg.model = ModelKind::bcs;
  for (int n : {4, 8}) {
    const ModelBundle model = make_model(cfg, n, 0);
    const std::size_t ground = *model.hamiltonian.sector().index_of(ising_ground_state(model.hamiltonian.sector(),
                                                                                    make_levels(cfg, n)));
    const auto runs = evolve_sweep(model.hamiltonian, sim_g, propagation_options(c));
    for (std::size_t i = 0; i < sim_g.size(); ++i) {
      t.add({sim_g[i], std::to_string(n), std::string("ground_prob_schrodinger"), runs[i].adiabatic_probs[ground]});
    }
  }
  Output out;
  out.primary = c.format == Format::json ? t.to_json().dump(2) + "\n" : t.to_csv();
  return out;
}

Output eta_time_figure(const RunConfig& c) {
  const int n = figure_n(c, 12);
  const ModelBundle model = make_model(c, n, 0);
  const std::vector<double> gs = figure_g(c, {1.0 / n, 0.25, 0.5, 1.0});
  const auto runs = evolve_sweep(model.hamiltonian, gs, propagation_options(c));
  Rows t{{"g", "t", "eta"}, {}};
  for (std::size_t i = 0; i < gs.size(); ++i) {
    for (std::size_t k = 0; k < runs[i].sample_times.size(); ++k) {
      t.add({gs[i], runs[i].sample_times[k], runs[i].eta_trace[k]});
    }
  }
  Output out;
  out.manifest_extra["model"] = model.description;
  out.primary = c.format == Format::json ? t.to_json().dump(2) + "\n" : t.to_csv();
  return out;
}

Output polarization_figure(const RunConfig& c, ModelKind kind) {
  RunConfig cfg = c;
  cfg.model = kind;
  const int n = figure_n(c, 12);
  const ModelBundle model = make_model(cfg, n, 0);
  Rows t{{"g", "spin", "source", "polarization"}, {}};
  if (kind == ModelKind::bcs) {
    for (double g : log_spaced(0.005, 2.0, 60)) {
      const std::vector<double> m = marginal_polarizations(GibbsLaw(n, 0, g));
      for (int j = 0; j < n; ++j) t.add({g, static_cast<long long>(j + 1), std::string("gibbs"), m[j]});
    }
  }
  const std::vector<double> gs = figure_g(c, {0.02, 0.05, 0.1, 0.2, 0.4, 0.8});
  const auto runs = evolve_sweep(model.hamiltonian, gs, propagation_options(c));
  for (std::size_t i = 0; i < gs.size(); ++i) {
    const auto& final_pol = runs[i].polarization_trace.back();
    for (int j = 0; j < n; ++j) t.add({gs[i], static_cast<long long>(j + 1), std::string("schrodinger"), final_pol[j]});
  }
  Output out;
  out.manifest_extra["model"] = model.description;
  out.primary = c.format == Format::json ? t.to_json().dump(2) + "\n" : t.to_csv();
  return out;
}

Output accuracy_figure(const RunConfig& c) {
  std::vector<int> ns{200, 600, 2000};
  if (c.n_given) ns = {c.n};
  const std::vector<double> gs = figure_g(c, log_spaced(1e-4, 1e-1, 46));
  struct Point {
    double exact, approx;
  };
  std::vector<std::pair<int, double>> jobs;
  for (int n : ns)
    for (double g : gs) jobs.emplace_back(n, g);
  const auto pts = parallel_map<Point>(jobs.size(), [&](std::size_t i) {
    const auto [n, g] = jobs[i];
    return Point{eta_distribution(GibbsLaw(n, 0, g)).mean, mean_eta_approx(g, n)};
  });
  Rows t{{"g", "n", "eta_exact", "eta_approx"}, {}};
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    t.add({jobs[i].second, static_cast<long long>(jobs[i].first), pts[i].exact, pts[i].approx});
  }
  Output out;
  out.primary = c.format == Format::json ? t.to_json().dump(2) + "\n" : t.to_csv();
  return out;
}

// Even sizes: every even N up to 16 (where enumeration runs), then sparser.
std::vector<int> entropy_sizes(int max_n) {
  std::vector<int> ns;
  for (int n = 2; n <= std::min(16, max_n); n += 2) ns.push_back(n);
  for (int n = 24; n <= max_n; n += (n < 100 ? 8 : 50)) ns.push_back(n);
  if (ns.back() != max_n) ns.push_back(max_n);
  return ns;
}

constexpr int kDirectEntropyMaxN = 16;

Output entropy_fixed_g_figure(const RunConfig& c) {
  Rows t{{"g", "n", "quantity", "value"}, {}};
  for (double g : figure_g(c, {0.04, 0.1, 0.2})) {
    for (int n : entropy_sizes(400)) {
      t.add({g, std::to_string(n), std::string("entropy"), entropy_partition(g, n)});
      if (n <= kDirectEntropyMaxN) {
        t.add({g, std::to_string(n), std::string("entropy_direct"),
               entropy_direct(GibbsLaw(n, 0, g), build_sector(n, 0))});
      }
    }
    t.add({g, std::string("inf"), std::string("entropy_saturation"), entropy_saturation(g)});
  }
  Output out;
  out.primary = c.format == Format::json ? t.to_json().dump(2) + "\n" : t.to_csv();
  return out;
}

Output entropy_fixed_gn_figure(const RunConfig& c) {
  Rows t{{"gn", "n", "g", "quantity", "value"}, {}};
  for (double gn : {0.5, 1.0, 2.0, 5.0}) {
    for (int n : entropy_sizes(800)) {
      const double g = gn / n;
      t.add({gn, static_cast<long long>(n), g, std::string("entropy"), entropy_partition(g, n)});
      if (n <= kDirectEntropyMaxN) {
        t.add({gn, static_cast<long long>(n), g, std::string("entropy_direct"),
               entropy_direct(GibbsLaw(n, 0, g), build_sector(n, 0))});
      }
    }
  }
  Output out;
  out.primary = c.format == Format::json ? t.to_json().dump(2) + "\n" : t.to_csv();
  return out;
}

Output eta_distribution_figure(const RunConfig& c) {
  const int n = figure_n(c, 600);
  Rows t{{"g", "eta", "probability", "gaussian"}, {}};
  for (double g : figure_g(c, {0.005, 0.01, 0.02})) {
    const EtaDistribution d = eta_distribution(GibbsLaw(n, 0, g));
    const GaussianEta gauss = gaussian_eta(g, n);
    // Support points are 4/N apart; scale the density to a per-point mass.
    const double step = 4.0 / n;
    for (std::size_t k = 0; k < d.support.size(); ++k) {
      t.add({g, d.support[k], d.probs[k], gauss.density(d.support[k]) * step});
    }
  }
  Output out;
  out.primary = c.format == Format::json ? t.to_json().dump(2) + "\n" : t.to_csv();
  return out;
}

Output transition_figure(const RunConfig& c) {
  const int n = figure_n(c, 12);
  RunConfig cfg = c;
  cfg.model = ModelKind::bcs;
  const EnergyLevels base = make_levels(cfg, n);
  auto sector = std::make_shared<const SpinSector>(build_sector(n, 0));
  const PropagationOptions o = propagation_options(c);

  // Tracked microstates: the five most probable under the Gibbs law at g = 0.1.
  const std::vector<double> ref = enumerate_distribution(GibbsLaw(n, 0, 0.1), *sector);
  std::vector<std::size_t> order(ref.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ref[a] > ref[b]; });
  order.resize(std::min<std::size_t>(5, order.size()));

  Rows t{{"panel", "g", "eps_n", "microstate", "schrodinger", "schrodinger_adiabatic", "gibbs"}, {}};
  auto add_rows = [&](const std::string& panel, double g, double eps_n, const EvolutionResult& r) {
    const std::vector<double> exact = enumerate_distribution(GibbsLaw(n, 0, g), *sector);
    for (std::size_t idx : order) {
      t.add({panel, g, eps_n, to_bitstring((*sector)[idx], n), r.final_probs[idx], r.adiabatic_probs[idx], exact[idx]});
    }
  };

  const std::vector<double> gs = figure_g(c, {0.05, 0.1, 0.2, 0.3, 0.5, 0.75, 1.0});
  const DrivenHamiltonian h = DrivenHamiltonian::bcs(sector, base);
  const auto runs_a = evolve_sweep(h, gs, o);
  for (std::size_t i = 0; i < gs.size(); ++i) add_rows("a", gs[i], base[n - 1], runs_a[i]);

  // Panel b: move the top level at g = 0.1. The order of the levels is kept, so
  // the final law must not change.
  std::vector<double> eps_values;
  for (int k = 1; k <= 5; ++k) eps_values.push_back(base[n - 2] + 0.2 * k);
  const auto runs_b = parallel_map<EvolutionResult>(eps_values.size(), [&](std::size_t i) {
    std::vector<double> eps = base.values();
    eps[n - 1] = eps_values[i];
    return propagate(DrivenHamiltonian::bcs(sector, EnergyLevels::from_values(eps)), 0.1, o);
  });
  for (std::size_t i = 0; i < eps_values.size(); ++i) add_rows("b", 0.1, eps_values[i], runs_b[i]);

  Output out;
  out.manifest_extra["levels"] = base.values();
  out.primary = c.format == Format::json ? t.to_json().dump(2) + "\n" : t.to_csv();
  return out;
}

}  // namespace

Output run_figure(const RunConfig& c) {
  const std::string& id = c.figure_id;
  const int n = figure_n(c, 12);
  Output out;
  if (id == "1b") out = spectrum_figure(c, ModelKind::bcs, {1.0 / n, 1.0});
  else if (id == "2a") out = ground_probability_figure(c);
  else if (id == "2b") out = eta_time_figure(c);
  else if (id == "4a") out = polarization_figure(c, ModelKind::bcs);
  else if (id == "4b") out = accuracy_figure(c);
  else if (id == "5a") out = entropy_fixed_g_figure(c);
  else if (id == "5b") out = entropy_fixed_gn_figure(c);
  else if (id == "6") out = eta_distribution_figure(c);
  else if (id == "8") out = transition_figure(c);
  else if (id == "9a") out = spectrum_figure(c, ModelKind::three_body, {1.0 / n});
  else if (id == "9b") out = polarization_figure(c, ModelKind::three_body);
  else throw ValidationError("unknown figure id '" + id + "' (expected 1b 2a 2b 4a 4b 5a 5b 6 8 9a 9b)");
  out.manifest_extra["figure"] = id;
  return out;
}

}  // namespace qanneal::cli
