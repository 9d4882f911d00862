#include <cmath>
#include <iostream>
#include <numbers>
#include <ostream>

#include "cli/cli.hpp"
#include "qanneal/analytics.hpp"
#include "qanneal/error.hpp"
#include "qanneal/eta_markov.hpp"
#include "qanneal/gibbs.hpp"
#include "qanneal/propagator.hpp"
#include "qanneal/qgroup.hpp"
#include "qanneal/spectrum.hpp"

namespace qanneal::cli {

namespace {

// Minima of every adjacent gap are refined for small sectors; larger ones
// default to the bottom of the spectrum, where the figures zoom in.
constexpr std::size_t kAllGapsDimension = 100;
constexpr std::size_t kDefaultGapWindow = 8;
// Direct entropy sums are skipped beyond this sector dimension.
constexpr std::size_t kDirectEntropyDimension = 1'000'000;

json gap_json(const GapMinimum& m) {
  return {{"level", m.level},
          {"t_star", m.t_star},
          {"gap", m.gap},
          {"classification", to_string(m.classification)},
          {"boundary", m.boundary}};
}

std::string text_or_dump(const json& j) { return j.dump(2) + "\n"; }

json single_or_runs(std::vector<json> runs) {
  if (runs.size() == 1) return std::move(runs.front());
  return json{{"runs", std::move(runs)}};
}

}  // namespace

Output run_spectrum(const RunConfig& config) {
  const ModelBundle model = make_model(config, config.n, config.two_sz);
  const DrivenHamiltonian& h = model.hamiltonian;
  const std::vector<double> grid = log_spaced(config.t_min, config.t_max, config.points);
  ScanOptions options;
  options.gap_levels = config.gap_levels;
  if (!options.gap_levels && h.dimension() > kAllGapsDimension) options.gap_levels = kDefaultGapWindow;

  const auto scans = parallel_map<SpectrumScan>(
      config.g.size(), [&](std::size_t i) { return spectrum_scan(h, config.g[i], grid, options); });

  Output out;
  out.manifest_extra["model"] = model.description;
  out.manifest_extra["gap_levels"] = options.gap_levels ? json(*options.gap_levels) : json("all");
  json gaps = json::array();
  for (std::size_t i = 0; i < scans.size(); ++i) {
    for (const auto& m : scans[i].minima) {
      json j = gap_json(m);
      j["g"] = config.g[i];
      gaps.push_back(std::move(j));
    }
  }
  if (config.format == Format::json) {
    json runs = json::array();
    for (std::size_t i = 0; i < scans.size(); ++i) {
      json mins = json::array();
      for (const auto& m : scans[i].minima) mins.push_back(gap_json(m));
      runs.push_back({{"g", config.g[i]}, {"times", scans[i].times}, {"eigenvalues", scans[i].eigenvalues},
                      {"gaps", std::move(mins)}});
    }
    out.primary = text_or_dump({{"n", config.n}, {"two_sz", config.two_sz}, {"model", to_string(config.model)},
                                {"spectra", std::move(runs)}});
    return out;
  }
  Table t{{"g", "t", "level_index", "eigenvalue"}, {}};
  for (std::size_t i = 0; i < scans.size(); ++i) {
    for (std::size_t k = 0; k < scans[i].times.size(); ++k) {
      const auto& ev = scans[i].eigenvalues[k];
      for (std::size_t l = 0; l < ev.size(); ++l) {
        t.add({config.g[i], scans[i].times[k], static_cast<long long>(l), ev[l]});
      }
    }
  }
  out.primary = t.to_csv();
  out.sidecars.emplace_back(".gaps.json", text_or_dump(gaps));
  return out;
}

namespace {

json evolution_json(const EvolutionResult& r, const SpinSector& sector, double g, const RunConfig& config) {
  const int n = sector.n_spins();
  json eta = json::array();
  for (std::size_t k = 0; k < r.eta_trace.size(); ++k) eta.push_back({r.sample_times[k], r.eta_trace[k]});
  json pol = json::object();
  for (int j = 0; j < n; ++j) {
    json trace = json::array();
    for (std::size_t k = 0; k < r.sample_times.size(); ++k) {
      trace.push_back({r.sample_times[k], r.polarization_trace[k][j]});
    }
    pol[std::to_string(j + 1)] = std::move(trace);
  }
  json finals = json::object();
  json adiabatic = json::object();
  for (std::size_t i = 0; i < sector.dimension(); ++i) {
    const std::string key = to_bitstring(sector[i], n);
    finals[key] = r.final_probs[i];
    if (!r.adiabatic_probs.empty()) adiabatic[key] = r.adiabatic_probs[i];
  }
  json j;
  j["params"] = {{"n", n},   {"two_sz", sector.two_sz()}, {"g", g},         {"model", to_string(config.model)},
                 {"t0", config.t0}, {"t1", config.t1},     {"tol", config.tol}};
  j["final_eta"] = r.eta_trace.empty() ? json(nullptr) : json(r.eta_trace.back());
  j["eta_trace"] = std::move(eta);
  j["polarizations"] = std::move(pol);
  j["final_probs"] = std::move(finals);
  if (!r.adiabatic_probs.empty()) j["adiabatic_probs"] = std::move(adiabatic);
  j["norm_drift"] = r.norm_drift;
  j["step_count"] = r.step_count;
  j["rejected_steps"] = r.rejected_steps;
  return j;
}

}  // namespace

Output run_evolve(const RunConfig& config) {
  const ModelBundle model = make_model(config, config.n, config.two_sz);
  const DrivenHamiltonian& h = model.hamiltonian;
  PropagationOptions options;
  options.t0 = config.t0;
  options.t1 = config.t1;
  options.tol = config.tol;
  options.samples = config.samples;
  options.adiabatic_readout = h.dimension() <= kDenseCapacity;

  const auto results = parallel_map<EvolutionResult>(
      config.g.size(), [&](std::size_t i) { return propagate(h, config.g[i], options); });

  Output out;
  out.manifest_extra["model"] = model.description;
  const SpinSector& sector = h.sector();
  if (config.format == Format::json) {
    std::vector<json> runs;
    for (std::size_t i = 0; i < results.size(); ++i) runs.push_back(evolution_json(results[i], sector, config.g[i], config));
    out.primary = text_or_dump(single_or_runs(std::move(runs)));
    return out;
  }
  const int n = sector.n_spins();
  Table trace{{"g", "t", "eta"}, {}};
  for (int j = 1; j <= n; ++j) trace.columns.push_back("s_" + std::to_string(j));
  Table finals{{"g", "microstate", "probability", "adiabatic_probability"}, {}};
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    for (std::size_t k = 0; k < r.sample_times.size(); ++k) {
      std::vector<Cell> row{config.g[i], r.sample_times[k], r.eta_trace.empty() ? NAN : r.eta_trace[k]};
      for (double s : r.polarization_trace[k]) row.emplace_back(s);
      trace.add(std::move(row));
    }
    for (std::size_t m = 0; m < sector.dimension(); ++m) {
      finals.add({config.g[i], to_bitstring(sector[m], n), r.final_probs[m],
                  r.adiabatic_probs.empty() ? NAN : r.adiabatic_probs[m]});
    }
  }
  out.primary = trace.to_csv();
  out.sidecars.emplace_back(".final.csv", finals.to_csv());
  return out;
}

Output run_gibbs(const RunConfig& config) {
  const SpinSector sector = build_sector(config.n, config.two_sz, kEnumerationCap);
  const int n = config.n;
  const bool even = n % 2 == 0;
  Output out;
  if (config.format == Format::json) {
    std::vector<json> runs;
    for (double g : config.g) {
      const GibbsLaw law(n, config.two_sz, g);
      const std::vector<double> p = enumerate_distribution(law, sector);
      json probs = json::object();
      for (std::size_t i = 0; i < p.size(); ++i) probs[to_bitstring(sector[i], n)] = p[i];
      runs.push_back({{"params", {{"n", n}, {"two_sz", config.two_sz}, {"g", g}}},
                      {"x", law.x()},
                      {"ground_prob", ground_prob(law)},
                      {"probabilities", std::move(probs)}});
    }
    out.primary = text_or_dump(single_or_runs(std::move(runs)));
    return out;
  }
  Table t{{"g", "microstate", "probability"}, {}};
  if (even) t.columns.push_back("eta");
  for (double g : config.g) {
    const GibbsLaw law(n, config.two_sz, g);
    const std::vector<double> p = enumerate_distribution(law, sector);
    for (std::size_t i = 0; i < p.size(); ++i) {
      std::vector<Cell> row{g, to_bitstring(sector[i], n), p[i]};
      if (even) row.emplace_back(eta_of(sector[i], n));
      t.add(std::move(row));
    }
  }
  out.primary = t.to_csv();
  return out;
}

Output run_eta_dist(const RunConfig& config) {
  if (config.two_sz != 0) throw ValidationError("eta-dist is defined for two_sz = 0");
  const auto dists = parallel_map<EtaDistribution>(
      config.g.size(), [&](std::size_t i) { return eta_distribution(GibbsLaw(config.n, 0, config.g[i])); });
  Output out;
  if (config.format == Format::json) {
    std::vector<json> runs;
    for (const auto& d : dists) {
      runs.push_back({{"n", d.n},
                      {"g", d.g},
                      {"support", d.support},
                      {"probs", d.probs},
                      {"mean", d.mean},
                      {"variance", d.variance},
                      {"mean_approx", mean_eta_approx(d.g, d.n)},
                      {"variance_approx", var_eta_approx(d.g, d.n)}});
    }
    out.primary = text_or_dump(single_or_runs(std::move(runs)));
    return out;
  }
  Table t{{"g", "n", "eta", "probability"}, {}};
  for (const auto& d : dists) {
    for (std::size_t k = 0; k < d.support.size(); ++k) {
      t.add({d.g, static_cast<long long>(d.n), d.support[k], d.probs[k]});
    }
  }
  out.primary = t.to_csv();
  return out;
}

Output run_entropy(const RunConfig& config) {
  if (config.two_sz != 0) throw ValidationError("the partition-function entropy is defined for two_sz = 0");
  if (config.n % 2 != 0) throw ValidationError("entropy needs even N");
  const bool direct = binomial(config.n, config.n / 2) <= static_cast<double>(kDirectEntropyDimension);
  std::optional<SpinSector> sector;
  if (direct) sector = build_sector(config.n, 0);

  Table t{{"g", "n", "quantity", "value"}, {}};
  json runs = json::array();
  for (double g : config.g) {
    const double s = entropy_partition(g, config.n);
    const auto n = static_cast<long long>(config.n);
    t.add({g, n, std::string("entropy"), s});
    json run{{"g", g}, {"n", config.n}, {"entropy", s}, {"log_partition", log_partition(g, config.n)}};
    t.add({g, n, std::string("log_partition"), log_partition(g, config.n)});
    if (direct) {
      const double sd = entropy_direct(GibbsLaw(config.n, 0, g), *sector);
      t.add({g, n, std::string("entropy_direct"), sd});
      run["entropy_direct"] = sd;
    }
    if (g > 0.0) {
      t.add({g, n, std::string("entropy_saturation"), entropy_saturation(g)});
      run["entropy_saturation"] = entropy_saturation(g);
    }
    runs.push_back(std::move(run));
  }
  Output out;
  out.primary = config.format == Format::json ? text_or_dump(runs) : t.to_csv();
  return out;
}

Output run_qgroup(const RunConfig& config) {
  std::vector<double> qs;
  if (config.q) {
    qs.push_back(*config.q);
  } else {
    for (double g : config.g) qs.push_back(q_from_g(g));
  }
  std::vector<QGroupReport> reports;
  for (double q : qs) reports.push_back(qgroup_report(q));
  Output out;
  bool all_pass = true;
  for (const auto& r : reports) all_pass = all_pass && r.pass;
  out.exit_code = all_pass ? 0 : 4;
  if (config.format == Format::json) {
    std::vector<json> runs;
    for (const auto& r : reports) {
      runs.push_back({{"q", r.q},
                      {"ybz_residual", r.ybz_residual},
                      {"eigenvalues", r.eigenvalues},
                      {"expected", r.expected},
                      {"max_eigenvalue_error", r.max_eigenvalue_error},
                      {"pass", r.pass}});
    }
    out.primary = text_or_dump(single_or_runs(std::move(runs)));
    return out;
  }
  Table t{{"q", "ybz_residual", "sigma_1", "sigma_2", "sigma_3", "sigma_4", "expected_1", "expected_2",
           "expected_3", "expected_4", "pass"},
          {}};
  for (const auto& r : reports) {
    t.add({r.q, r.ybz_residual, r.eigenvalues[0], r.eigenvalues[1], r.eigenvalues[2], r.eigenvalues[3],
           r.expected[0], r.expected[1], r.expected[2], r.expected[3], static_cast<long long>(r.pass)});
  }
  out.primary = t.to_csv();
  return out;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  bool error_json = false;
  for (int i = 1; i < argc; ++i) {
    if (std::string_view(argv[i]) == "--error-json") error_json = true;
  }
  auto fail = [&](const char* kind, int code, const std::string& message) {
    if (error_json) {
      err << json{{"error", {{"kind", kind}, {"message", message}, {"exit_code", code}}}}.dump() << "\n";
    } else {
      err << "anneal: " << kind << " error: " << message << "\n";
    }
    return code;
  };
  try {
    const std::optional<RunConfig> config = parse_args(argc, argv, out);
    if (!config) return 0;
    Output result;
    const std::string& cmd = config->command;
    if (cmd == "spectrum") result = run_spectrum(*config);
    else if (cmd == "evolve") result = run_evolve(*config);
    else if (cmd == "gibbs") result = run_gibbs(*config);
    else if (cmd == "eta-dist") result = run_eta_dist(*config);
    else if (cmd == "entropy") result = run_entropy(*config);
    else if (cmd == "qgroup") result = run_qgroup(*config);
    else if (cmd == "verify") result = run_verify(*config);
    else result = run_figure(*config);
    emit(*config, result, out);
    if (result.exit_code == 4) return fail("invariant", 4, "one or more checks failed");
    return result.exit_code;
  } catch (const ValidationError& e) {
    return fail("validation", 2, e.what());
  } catch (const CapacityError& e) {
    return fail("capacity", 3, e.what());
  } catch (const InvariantError& e) {
    return fail("invariant", 4, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail("validation", 2, e.what());
  }
}

}  // namespace qanneal::cli
