#include "qanneal/spin_sector.hpp"

#include <cmath>
#include <limits>

#include "qanneal/error.hpp"
#include "qanneal/levels.hpp"

namespace qanneal {

namespace {

constexpr std::string_view kUpArrow = "↑";
constexpr std::string_view kDownArrow = "↓";

}  // namespace

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)));
}

SpinSector build_sector(int n_spins, int two_sz, std::size_t cap) {
  if (n_spins < 2 || n_spins > kMaxSectorSpins) {
    throw ValidationError("n_spins must lie in [2, " + std::to_string(kMaxSectorSpins) + "], got " +
                          std::to_string(n_spins));
  }
  if ((n_spins + two_sz) % 2 != 0) {
    throw ValidationError("parity mismatch: n_spins + two_sz must be even (n_spins=" +
                          std::to_string(n_spins) + ", two_sz=" + std::to_string(two_sz) + ")");
  }
  const int n_up = (n_spins + two_sz) / 2;
  if (n_up < 0 || n_up > n_spins) {
    throw ValidationError("two_sz=" + std::to_string(two_sz) + " is outside [-n_spins, n_spins]");
  }

  SpinSector s;
  s.n_spins_ = n_spins;
  s.two_sz_ = two_sz;
  s.binom_.assign(n_spins + 1, std::vector<std::uint64_t>(n_up + 2, 0));
  for (int n = 0; n <= n_spins; ++n) {
    s.binom_[n][0] = 1;
    for (int k = 1; k <= std::min(n, n_up + 1); ++k) {
      const std::uint64_t a = s.binom_[n - 1][k - 1];
      const std::uint64_t b = (k <= n - 1) ? s.binom_[n - 1][k] : 0;
      s.binom_[n][k] = (a > std::numeric_limits<std::uint64_t>::max() - b)
                           ? std::numeric_limits<std::uint64_t>::max()
                           : a + b;
    }
  }
  const std::uint64_t dim = s.binom_[n_spins][n_up];
  if (dim > cap) {
    throw CapacityError("sector C(" + std::to_string(n_spins) + "," + std::to_string(n_up) + ") = " +
                        std::to_string(dim) + " exceeds capacity " + std::to_string(cap));
  }

  s.basis_.reserve(static_cast<std::size_t>(dim));
  if (n_up == 0) {
    s.basis_.push_back({0});
    return s;
  }
  // Gosper's hack walks same-popcount masks in ascending order.
  std::uint64_t v = (n_up == 64) ? ~0ULL : ((1ULL << n_up) - 1);
  const std::uint64_t limit = 1ULL << n_spins;
  while (v < limit) {
    s.basis_.push_back({v});
    const std::uint64_t c = v & (~v + 1);
    const std::uint64_t r = v + c;
    if (r == 0) break;
    v = (((r ^ v) >> 2) / c) | r;
  }
  return s;
}

bool SpinSector::contains(Microstate ms) const noexcept {
  return ms.n_up() == n_up() && (n_spins_ == 64 || (ms.bits >> n_spins_) == 0);
}

std::optional<std::size_t> SpinSector::index_of(Microstate ms) const noexcept {
  if (!contains(ms)) return std::nullopt;
  std::uint64_t rank = 0;
  int i = 0;
  std::uint64_t bits = ms.bits;
  while (bits != 0) {
    const int pos = std::countr_zero(bits);
    ++i;
    if (i <= pos) rank += binom_[pos][i];
    bits &= bits - 1;
  }
  return static_cast<std::size_t>(rank);
}

int lower_half_imbalance(Microstate ms, int n_spins) {
  if (n_spins % 2 != 0) {
    throw ValidationError("accuracy eta requires an even number of spins, got " + std::to_string(n_spins));
  }
  const std::uint64_t mask = (1ULL << (n_spins / 2)) - 1;
  const int up = std::popcount(ms.bits & mask);
  return 2 * up - n_spins / 2;
}

double eta_of(Microstate ms, int n_spins) {
  return 2.0 * lower_half_imbalance(ms, n_spins) / n_spins;
}

Microstate ising_ground_state(const SpinSector& sector, const EnergyLevels& levels) {
  if (static_cast<int>(levels.size()) != sector.n_spins()) {
    throw ValidationError("level count does not match sector size");
  }
  // Levels are stored in ascending order, so the lowest n_up spins are bits 0..n_up-1.
  const int n_up = sector.n_up();
  return Microstate{n_up == 0 ? 0ULL : ((1ULL << n_up) - 1)};
}

std::string to_arrows(Microstate ms, int n_spins) {
  std::string out;
  out.reserve(3 * n_spins);
  for (int j = 0; j < n_spins; ++j) out += ms.up(j) ? kUpArrow : kDownArrow;
  return out;
}

std::string to_bitstring(Microstate ms, int n_spins) {
  std::string out(n_spins, '0');
  for (int j = 0; j < n_spins; ++j) {
    if (ms.up(j)) out[j] = '1';
  }
  return out;
}

Microstate parse_microstate(std::string_view text, int* n_spins_out) {
  Microstate ms;
  int j = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (j >= kMaxSectorSpins) throw ValidationError("microstate longer than 63 spins");
    if (text[pos] == '0' || text[pos] == '1') {
      if (text[pos] == '1') ms.bits |= 1ULL << j;
      ++pos;
    } else if (text.substr(pos, kUpArrow.size()) == kUpArrow) {
      ms.bits |= 1ULL << j;
      pos += kUpArrow.size();
    } else if (text.substr(pos, kDownArrow.size()) == kDownArrow) {
      pos += kDownArrow.size();
    } else {
      throw ValidationError("unrecognized character in microstate '" + std::string(text) + "'");
    }
    ++j;
  }
  if (n_spins_out != nullptr) *n_spins_out = j;
  return ms;
}

}  // namespace qanneal
