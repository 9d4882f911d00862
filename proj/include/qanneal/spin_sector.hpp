#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qanneal {

class EnergyLevels;

/// Spin configuration of up to 63 spins. Bit j set means spin j+1 points up.
/// Spins are always labelled by ascending energy parameter.
struct Microstate {
  std::uint64_t bits = 0;

  [[nodiscard]] bool up(int spin) const noexcept { return (bits >> spin) & 1U; }
  /// s^z of the 0-based spin, +1/2 or -1/2.
  [[nodiscard]] double sz(int spin) const noexcept { return up(spin) ? 0.5 : -0.5; }
  [[nodiscard]] int n_up() const noexcept { return std::popcount(bits); }

  friend bool operator==(Microstate, Microstate) = default;
  friend auto operator<=>(Microstate, Microstate) = default;
};

inline constexpr int kMaxSectorSpins = 63;
inline constexpr std::size_t kDefaultSectorCap = 2'000'000;

/// Fixed-magnetization basis, ordered by ascending bit value.
class SpinSector {
 public:
  [[nodiscard]] int n_spins() const noexcept { return n_spins_; }
  [[nodiscard]] int two_sz() const noexcept { return two_sz_; }
  [[nodiscard]] int n_up() const noexcept { return (n_spins_ + two_sz_) / 2; }
  [[nodiscard]] int n_down() const noexcept { return n_spins_ - n_up(); }
  [[nodiscard]] std::size_t dimension() const noexcept { return basis_.size(); }

  [[nodiscard]] const std::vector<Microstate>& basis() const noexcept { return basis_; }
  [[nodiscard]] Microstate operator[](std::size_t i) const { return basis_[i]; }

  /// Position of `ms` in the basis; nullopt if it is not a member of this sector.
  /// Uses the combinatorial (colex) rank, which coincides with ascending bit order.
  [[nodiscard]] std::optional<std::size_t> index_of(Microstate ms) const noexcept;

  [[nodiscard]] bool contains(Microstate ms) const noexcept;

 private:
  friend SpinSector build_sector(int n_spins, int two_sz, std::size_t cap);

  int n_spins_ = 0;
  int two_sz_ = 0;
  std::vector<Microstate> basis_;
  // binom_[n][k] for n <= n_spins_, k <= n_up
  std::vector<std::vector<std::uint64_t>> binom_;
};

/// Enumerates the sector with `two_sz` = 2 S^z_tot. Throws ValidationError on
/// parity or range violations and CapacityError when C(n, n_up) exceeds `cap`.
SpinSector build_sector(int n_spins, int two_sz, std::size_t cap = kDefaultSectorCap);

/// Exact binomial coefficient as a double (valid well beyond 64-bit range).
double binomial(int n, int k);

/// Imbalance (#up - #down) among the lower half of the spins. Requires even N.
int lower_half_imbalance(Microstate ms, int n_spins);

/// Accuracy (4/N) sum_{k <= N/2} s_k^z. Throws ValidationError for odd N.
double eta_of(Microstate ms, int n_spins);

/// Microstate with the n_up lowest-energy spins up.
Microstate ising_ground_state(const SpinSector& sector, const EnergyLevels& levels);

/// "↑↓↑↓" with spin 1 leftmost.
std::string to_arrows(Microstate ms, int n_spins);
/// "1010" with spin 1 leftmost, 1 = up.
std::string to_bitstring(Microstate ms, int n_spins);
/// Accepts either arrow or 0/1 notation (spin 1 leftmost).
Microstate parse_microstate(std::string_view text, int* n_spins_out = nullptr);

}  // namespace qanneal
