#include "qanneal/levels.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "qanneal/error.hpp"

namespace qanneal {

std::string to_string(LevelRecipe recipe) {
  switch (recipe) {
    case LevelRecipe::explicit_values: return "explicit";
    case LevelRecipe::jitter: return "jitter";
    case LevelRecipe::equidistant: return "equidistant";
  }
  return "unknown";
}

EnergyLevels EnergyLevels::from_values(std::vector<double> eps, LevelRecipe recipe,
                                       std::optional<std::uint64_t> seed) {
  if (eps.size() < 2) throw ValidationError("at least two energy levels are required");
  for (double e : eps) {
    if (!std::isfinite(e)) throw ValidationError("energy levels must be finite");
  }
  EnergyLevels levels;
  levels.permutation_.resize(eps.size());
  std::iota(levels.permutation_.begin(), levels.permutation_.end(), std::size_t{0});
  std::stable_sort(levels.permutation_.begin(), levels.permutation_.end(),
                   [&](std::size_t a, std::size_t b) { return eps[a] < eps[b]; });
  levels.eps_.reserve(eps.size());
  for (std::size_t j : levels.permutation_) levels.eps_.push_back(eps[j]);

  if (levels.eps_.front() <= 0.0) {
    throw ValidationError("energy levels must be positive (smallest is " + std::to_string(levels.eps_.front()) + ")");
  }
  for (std::size_t j = 0; j + 1 < levels.eps_.size(); ++j) {
    if (!(levels.eps_[j] < levels.eps_[j + 1])) {
      throw ValidationError("energy levels must be nondegenerate (eps_" + std::to_string(j + 1) + " = eps_" +
                            std::to_string(j + 2) + ")");
    }
  }
  levels.recipe_ = recipe;
  levels.seed_ = seed;
  return levels;
}

EnergyLevels EnergyLevels::equidistant(int n, std::optional<double> spacing) {
  if (n < 2) throw ValidationError("at least two energy levels are required");
  const double step = spacing.value_or(1.0 / n);
  if (!(step > 0.0)) throw ValidationError("level spacing must be positive");
  std::vector<double> eps(n);
  for (int j = 0; j < n; ++j) eps[j] = step * (j + 1);
  return from_values(std::move(eps), LevelRecipe::equidistant);
}

double EnergyLevels::min_spacing() const {
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j + 1 < eps_.size(); ++j) gap = std::min(gap, eps_[j + 1] - eps_[j]);
  return gap;
}

bool EnergyLevels::is_equidistant(double rel_tol) const {
  const double step = eps_.front();
  for (std::size_t j = 0; j < eps_.size(); ++j) {
    const double expected = step * static_cast<double>(j + 1);
    if (std::abs(eps_[j] - expected) > rel_tol * expected) return false;
  }
  return true;
}

Engine make_engine(std::uint64_t seed) { return Engine(seed); }

double uniform_open(Engine& engine) {
  const std::uint64_t k = engine() >> 11;
  return (static_cast<double>(k) + 0.5) * 0x1.0p-53;
}

double standard_normal(Engine& engine) {
  const double u1 = uniform_open(engine);
  const double u2 = uniform_open(engine);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

EnergyLevels generate_levels(int n, std::uint64_t seed) {
  if (n < 2) throw ValidationError("at least two energy levels are required");
  Engine engine = make_engine(seed);
  std::vector<double> eps(n);
  const double half_width = 0.5 / n;
  for (int j = 0; j < n; ++j) {
    const double xi = (2.0 * uniform_open(engine) - 1.0) * half_width;
    eps[j] = static_cast<double>(j + 1) / n + xi;
  }
  // Neighbouring jitters differ by less than 1/N, so the order is already ascending.
  for (int j = 0; j + 1 < n; ++j) {
    if (!(eps[j] < eps[j + 1])) throw InvariantError("generated levels are not strictly increasing");
  }
  return EnergyLevels::from_values(std::move(eps), LevelRecipe::jitter, seed);
}

EnergyLevels read_levels_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open level file " + path.string());
  std::vector<double> eps;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ss(line);
    ss.imbue(std::locale::classic());
    double v = 0.0;
    std::string rest;
    if (!(ss >> v) || (ss >> rest)) {
      throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": expected one decimal value");
    }
    if (!eps.empty() && !(v > eps.back())) {
      throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": levels must be strictly ascending");
    }
    eps.push_back(v);
  }
  return EnergyLevels::from_values(std::move(eps), LevelRecipe::explicit_values);
}

}  // namespace qanneal
