#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace qanneal {

/// How a level set was produced.
enum class LevelRecipe { explicit_values, jitter, equidistant };

std::string to_string(LevelRecipe recipe);

/// Strictly increasing positive energy parameters eps_1 < ... < eps_N.
///
/// Inputs given in arbitrary order are sorted on construction; `permutation()[j]`
/// is the input position of the spin that now carries label j. Every other module
/// assumes this ascending labelling.
class EnergyLevels {
 public:
  static EnergyLevels from_values(std::vector<double> eps, LevelRecipe recipe = LevelRecipe::explicit_values,
                                  std::optional<std::uint64_t> seed = std::nullopt);

  /// eps_j = spacing * j, j = 1..n. The default spacing is 1/n.
  static EnergyLevels equidistant(int n, std::optional<double> spacing = std::nullopt);

  [[nodiscard]] std::size_t size() const noexcept { return eps_.size(); }
  [[nodiscard]] double operator[](std::size_t j) const { return eps_[j]; }
  [[nodiscard]] const std::vector<double>& values() const noexcept { return eps_; }
  [[nodiscard]] const std::vector<std::size_t>& permutation() const noexcept { return permutation_; }
  [[nodiscard]] LevelRecipe recipe() const noexcept { return recipe_; }
  [[nodiscard]] std::optional<std::uint64_t> seed() const noexcept { return seed_; }

  /// Smallest eps_{j+1} - eps_j.
  [[nodiscard]] double min_spacing() const;
  /// True when eps_j = eps_1 * j for all j (relative tolerance `rel_tol`).
  [[nodiscard]] bool is_equidistant(double rel_tol = 1e-12) const;

 private:
  std::vector<double> eps_;
  std::vector<std::size_t> permutation_;
  LevelRecipe recipe_ = LevelRecipe::explicit_values;
  std::optional<std::uint64_t> seed_;
};

/// eps_j = j/N + xi_j with xi_j uniform on the open interval (-1/(2N), 1/(2N)).
/// Randomness comes from `make_engine(seed)`, see below.
EnergyLevels generate_levels(int n, std::uint64_t seed);

/// Plain text, one decimal value per line, strictly ascending. Blank lines and
/// lines starting with '#' are skipped.
EnergyLevels read_levels_file(const std::filesystem::path& path);

// Seeded randomness. The engine is std::mt19937_64 (the 64-bit Mersenne Twister,
// fully specified by the C++ standard); variates are derived from its raw output
// with the formulas below rather than <random> distributions, whose algorithms are
// implementation-defined. Any implementation of MT19937-64 reproduces these streams.
using Engine = std::mt19937_64;

Engine make_engine(std::uint64_t seed);

/// (k + 1/2) * 2^-53 where k is the top 53 bits of one engine draw; lies in (0, 1).
double uniform_open(Engine& engine);

/// Box-Muller: sqrt(-2 ln u1) cos(2 pi u2) from two `uniform_open` draws.
double standard_normal(Engine& engine);

}  // namespace qanneal
