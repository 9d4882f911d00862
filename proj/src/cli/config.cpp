#include <cstdlib>
#include <memory>
#include <ostream>

#include <CLI11.hpp>

#include "cli/cli.hpp"
#include "qanneal/error.hpp"
#include "qanneal/version.hpp"

namespace qanneal::cli {

namespace {

const std::vector<std::string> kCommands = {"spectrum", "evolve", "gibbs", "eta-dist",
                                            "entropy",  "qgroup", "verify", "figure"};

void check(bool ok, const std::string& message) {
  if (!ok) throw ValidationError(message);
}

}  // namespace

std::string to_string(Format f) {
  switch (f) {
    case Format::csv: return "csv";
    case Format::json: return "json";
    case Format::text: return "text";
  }
  return "csv";
}

std::string to_string(LevelSource s) {
  switch (s) {
    case LevelSource::seed: return "seed";
    case LevelSource::file: return "file";
    case LevelSource::equidistant: return "equidistant";
  }
  return "seed";
}

std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out) {
  RunConfig cfg;
  CLI::App app{"Quantum annealing with the driven BCS Hamiltonian: dynamics, exact final-state law and analytics",
               "anneal"};
  app.set_version_flag("--version", std::string("anneal ") + kVersion);
  app.allow_extras(false);

  std::string model = "bcs";
  std::string format;
  std::optional<std::uint64_t> seed;
  bool equidistant = false;
  std::vector<double> g_list;
  std::optional<double> g_single;
  std::optional<std::size_t> gap_levels;

  app.add_option("command", cfg.command, "spectrum | evolve | gibbs | eta-dist | entropy | qgroup | verify | figure")
      ->required()
      ->check(CLI::IsMember(kCommands));
  auto* n_opt = app.add_option("--n", cfg.n, "number of spins");
  app.add_option("--two-sz", cfg.two_sz, "twice the total magnetization S^z (same parity as N)");
  auto* g_opt = app.add_option("--g", g_single, "coupling g (annealing time scale)");
  auto* gl_opt = app.add_option("--g-list", g_list, "comma-separated coupling sweep")->delimiter(',');
  g_opt->excludes(gl_opt);
  app.add_option("--model", model, "bcs | three-body")->check(CLI::IsMember({"bcs", "three-body"}));
  auto* seed_opt = app.add_option("--seed", seed, "PRNG seed (mt19937_64) for jittered levels / couplings");
  auto* file_opt = app.add_option("--levels-file", cfg.levels_file, "ascending energy levels, one per line");
  auto* eq_opt = app.add_flag("--equidistant", equidistant, "use eps_j = j/N");
  file_opt->excludes(eq_opt);
  app.add_option("--coupling-variance", cfg.coupling_variance, "variance of the three-body factors J_i");
  app.add_option("--t0", cfg.t0, "initial time");
  app.add_option("--t1", cfg.t1, "final time");
  app.add_option("--tol", cfg.tol, "integrator norm-drift budget");
  app.add_option("--samples", cfg.samples, "log-spaced observable samples");
  app.add_option("--t-min", cfg.t_min, "spectrum grid start");
  app.add_option("--t-max", cfg.t_max, "spectrum grid end");
  app.add_option("--points", cfg.points, "spectrum grid points");
  app.add_option("--gap-levels", gap_levels, "refine minima of the lowest K adjacent gaps only");
  app.add_option("--q", cfg.q, "deformation parameter for qgroup (default exp(-pi g))");
  app.add_option("--id", cfg.figure_id, "figure id: 1b 2a 2b 4a 4b 5a 5b 6 8 9a 9b");
  app.add_option("--out", cfg.out, "output path (default stdout)");
  auto* fmt_opt = app.add_option("--format", format, "csv | json | text")->check(CLI::IsMember({"csv", "json", "text"}));
  app.add_flag("--error-json", cfg.error_json, "report failures as JSON on stderr");
  app.add_flag("--perturb-p-minus", cfg.perturb_p_minus, "verify: inject a sign error into p- (mutation check)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::CallForVersion&) {
    out << "anneal " << kVersion << "\n";
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw ValidationError(e.what());
  }

  cfg.n_given = n_opt->count() > 0;
  if (g_single) {
    cfg.g = {*g_single};
    cfg.g_given = true;
  } else if (gl_opt->count() > 0) {
    cfg.g = g_list;
    cfg.g_given = true;
  }
  cfg.model = model == "three-body" ? ModelKind::three_body : ModelKind::bcs;
  if (seed) cfg.seed = *seed;
  if (file_opt->count() > 0) {
    check(seed_opt->count() == 0, "--seed and --levels-file are mutually exclusive");
    cfg.levels = LevelSource::file;
  } else if (equidistant) {
    check(seed_opt->count() == 0 || cfg.model == ModelKind::three_body,
          "--seed and --equidistant are mutually exclusive for the BCS model");
    cfg.levels = LevelSource::equidistant;
  }
  cfg.gap_levels = gap_levels;
  if (fmt_opt->count() > 0) {
    cfg.format = format == "json" ? Format::json : format == "text" ? Format::text : Format::csv;
    cfg.format_given = true;
  } else if (cfg.command == "evolve" || cfg.command == "qgroup") {
    cfg.format = Format::json;
  } else if (cfg.command == "verify") {
    cfg.format = Format::text;
  }

  check(cfg.n >= 2, "--n must be at least 2");
  check(cfg.n <= 10000, "--n must not exceed 10000");
  check(!cfg.g.empty(), "--g-list must not be empty");
  for (double g : cfg.g) check(g >= 0.0 && std::isfinite(g), "couplings must be finite and nonnegative");
  check(cfg.t0 > 0.0 && cfg.t1 > cfg.t0, "require 0 < t0 < t1");
  check(cfg.tol > 0.0, "--tol must be positive");
  check(cfg.samples >= 2, "--samples must be at least 2");
  check(cfg.t_min > 0.0 && cfg.t_max > cfg.t_min, "require 0 < t-min < t-max");
  check(cfg.points >= 3, "--points must be at least 3");
  check(cfg.coupling_variance >= 0.0, "--coupling-variance must be nonnegative");
  check(cfg.command != "figure" || !cfg.figure_id.empty(), "figure needs --id");
  check(cfg.format != Format::text || cfg.command == "verify", "--format text applies to verify only");
  return cfg;
}

json config_to_json(const RunConfig& c) {
  json j;
  j["command"] = c.command;
  j["n"] = c.n;
  j["two_sz"] = c.two_sz;
  j["g"] = c.g;
  j["model"] = to_string(c.model);
  j["levels_source"] = to_string(c.levels);
  if (c.levels == LevelSource::seed || c.model == ModelKind::three_body) j["seed"] = c.seed;
  if (c.levels == LevelSource::file) j["levels_file"] = c.levels_file;
  if (c.model == ModelKind::three_body) j["coupling_variance"] = c.coupling_variance;
  j["t0"] = c.t0;
  j["t1"] = c.t1;
  j["tol"] = c.tol;
  j["samples"] = c.samples;
  j["t_min"] = c.t_min;
  j["t_max"] = c.t_max;
  j["points"] = c.points;
  j["gap_levels"] = c.gap_levels ? json(*c.gap_levels) : json(nullptr);
  j["q"] = c.q ? json(*c.q) : json(nullptr);
  if (!c.figure_id.empty()) j["figure_id"] = c.figure_id;
  j["format"] = to_string(c.format);
  if (c.perturb_p_minus) j["perturb_p_minus"] = true;
  return j;
}

EnergyLevels make_levels(const RunConfig& config, int n) {
  switch (config.levels) {
    case LevelSource::equidistant: return EnergyLevels::equidistant(n);
    case LevelSource::file: {
      EnergyLevels lv = read_levels_file(config.levels_file);
      check(static_cast<int>(lv.size()) == n, "levels file holds " + std::to_string(lv.size()) +
                                                  " values but N = " + std::to_string(n));
      return lv;
    }
    case LevelSource::seed: break;
  }
  return generate_levels(n, config.seed);
}

ModelBundle make_model(const RunConfig& config, int n, int two_sz) {
  auto sector = std::make_shared<const SpinSector>(build_sector(n, two_sz));
  if (config.model == ModelKind::three_body) {
    const ThreeBodyCouplings c = generate_three_body_couplings(n, config.coupling_variance, config.seed);
    json d{{"model", "three-body"}, {"J", c.J}, {"variance", c.variance}, {"seed", config.seed},
           {"prng", "mt19937_64"}};
    return {DrivenHamiltonian::three_body(sector, c), d};
  }
  const EnergyLevels lv = make_levels(config, n);
  json d{{"model", "bcs"}, {"levels", lv.values()}, {"recipe", to_string(lv.recipe())}};
  if (lv.seed()) {
    d["seed"] = *lv.seed();
    d["prng"] = "mt19937_64";
  }
  return {DrivenHamiltonian::bcs(sector, lv), d};
}

unsigned sweep_threads() {
  if (const char* env = std::getenv("ANNEAL_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<unsigned>(v);
    throw ValidationError("ANNEAL_THREADS must be a positive integer");
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace qanneal::cli
