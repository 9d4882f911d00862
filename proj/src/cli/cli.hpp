#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <json.hpp>

#include "qanneal/hamiltonian.hpp"
#include "qanneal/levels.hpp"

namespace qanneal::cli {

using nlohmann::json;

enum class Format { csv, json, text };
enum class LevelSource { seed, file, equidistant };

std::string to_string(Format f);
std::string to_string(LevelSource s);

struct RunConfig {
  std::string command;
  int n = 12;
  bool n_given = false;
  int two_sz = 0;
  std::vector<double> g{1.0 / 12.0};
  bool g_given = false;
  ModelKind model = ModelKind::bcs;
  LevelSource levels = LevelSource::seed;
  std::uint64_t seed = 7;
  std::string levels_file;
  double coupling_variance = 0.1;
  double t0 = 1e-3;
  double t1 = 1e3;
  double tol = 1e-8;
  std::size_t samples = 200;
  double t_min = 1e-2;
  double t_max = 1e2;
  std::size_t points = 100;
  std::optional<std::size_t> gap_levels;
  std::optional<double> q;
  std::string figure_id;
  std::string out;  ///< empty means stdout
  Format format = Format::csv;
  bool format_given = false;
  bool error_json = false;
  bool perturb_p_minus = false;
};

/// Parses argv into a RunConfig. Returns nullopt after printing help/version.
std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out);

json config_to_json(const RunConfig& config);

/// Level set for `n` spins from the configured source.
EnergyLevels make_levels(const RunConfig& config, int n);

struct ModelBundle {
  DrivenHamiltonian hamiltonian;
  json description;  ///< levels or couplings, for the manifest
};

ModelBundle make_model(const RunConfig& config, int n, int two_sz);

// ---- emission -------------------------------------------------------------

/// Round-trip decimal text for a double ("%.17g"; nan/inf spelled out).
std::string format_double(double v);

using Cell = std::variant<double, long long, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) { rows.push_back(std::move(row)); }
  [[nodiscard]] std::string to_csv() const;
  [[nodiscard]] json to_json() const;
};

/// Everything a command produces. `primary` goes to --out (or stdout); the
/// sidecars are written next to it as <out><suffix> and only when --out is set.
struct Output {
  std::string primary;
  std::vector<std::pair<std::string, std::string>> sidecars;
  json manifest_extra = json::object();
  int exit_code = 0;
};

/// Writes the primary artifact, sidecars and <out>.manifest.json.
void emit(const RunConfig& config, const Output& output, std::ostream& stdout_stream);

// ---- execution ------------------------------------------------------------

/// Sweep parallelism: ANNEAL_THREADS if set (>= 1), else hardware concurrency.
unsigned sweep_threads();

/// Evaluates f(0..count-1) on up to sweep_threads() workers. Results come back
/// in index order; the first exception by index is rethrown.
template <typename T>
std::vector<T> parallel_map(std::size_t count, const std::function<T(std::size_t)>& f) {
  std::vector<std::optional<T>> slots(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        slots[i].emplace(f(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned n_threads = static_cast<unsigned>(std::min<std::size_t>(sweep_threads(), count));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  std::vector<T> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

Output run_spectrum(const RunConfig& config);
Output run_evolve(const RunConfig& config);
Output run_gibbs(const RunConfig& config);
Output run_eta_dist(const RunConfig& config);
Output run_entropy(const RunConfig& config);
Output run_qgroup(const RunConfig& config);
Output run_verify(const RunConfig& config);
Output run_figure(const RunConfig& config);

/// Full entry point: parse, run, emit, map errors to exit codes
/// (0 ok, 2 validation, 3 capacity, 4 invariant).
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qanneal::cli
