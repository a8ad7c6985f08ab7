#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "nst/types.hpp"

namespace nst {

/// Philox4x64-10 counter-based generator (stream version "philox4x64-10/v1").
/// Identical output on every platform for a given key, which is what makes
/// "same seed, same instance" hold across machines. The key is (seed, stream);
/// the 256-bit counter starts at zero and advances by one per 4-word block.
class Philox {
public:
  explicit Philox(std::uint64_t seed, std::uint64_t stream = 0)
      : key_{seed, stream}, ctr_{0, 0, 0, 0} {}

  std::uint64_t next_u64() {
    if (buf_pos_ == 4) {
      advance_counter();  // pre-increment, matching the numpy reference stream
      buf_ = block(ctr_, key_);
      buf_pos_ = 0;
    }
    return buf_[buf_pos_++];
  }

  /// Uniform double in [0, 1): top 53 bits of one 64-bit word.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller on two words; the second value of each
  /// pair is cached. u1 is mapped into (0, 1] so the log is always finite.
  double next_gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    const double u2 = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * M_PI * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

  /// Uniform integer in [0, n) by rejection, so the distribution is exact.
  std::uint64_t next_below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Philox::next_below: n must be > 0");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % n;
  }

  /// Uniformly random s-subset of {0..n-1} via partial Fisher-Yates.
  /// Returned in selection order (not sorted).
  std::vector<Index> sample_subset(Index n, Index s) {
    if (s < 0 || s > n) throw std::invalid_argument("Philox::sample_subset: bad s");
    std::vector<Index> pool(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
    std::vector<Index> out(static_cast<std::size_t>(s));
    for (Index i = 0; i < s; ++i) {
      const auto j = i + static_cast<Index>(next_below(static_cast<std::uint64_t>(n - i)));
      std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
      out[static_cast<std::size_t>(i)] = pool[static_cast<std::size_t>(i)];
    }
    return out;
  }

  /// One Philox block, exposed for seed-derivation hashing.
  static std::array<std::uint64_t, 4> block(std::array<std::uint64_t, 4> ctr,
                                            std::array<std::uint64_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += 0x9E3779B97F4A7C15ull;
        key[1] += 0xBB67AE8584CAA73Bull;
      }
      ctr = single_round(ctr, key);
    }
    return ctr;
  }

private:
  static void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi,
                      std::uint64_t& lo) {
    const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<std::uint64_t>(p >> 64);
    lo = static_cast<std::uint64_t>(p);
  }

  static std::array<std::uint64_t, 4> single_round(
      const std::array<std::uint64_t, 4>& ctr, const std::array<std::uint64_t, 2>& key) {
    std::uint64_t hi0, lo0, hi1, lo1;
    mulhilo(0xD2E7470EE14C6C93ull, ctr[0], hi0, lo0);
    mulhilo(0xCA5A826395121157ull, ctr[2], hi1, lo1);
    return {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }

  void advance_counter() {
    for (int i = 0; i < 4; ++i) {
      if (++ctr_[i] != 0) break;
    }
  }

  std::array<std::uint64_t, 2> key_;
  std::array<std::uint64_t, 4> ctr_;
  std::array<std::uint64_t, 4> buf_{};
  int buf_pos_ = 4;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

/// Stable 64-bit hash of up to four words, used to derive per-trial seeds
/// from (base seed, trial key) without correlating the streams.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a = 0,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
  return Philox::block({a, b, c, 0x5eed5eed5eed5eedull}, {base, 0x9E3779B97F4A7C15ull})[0];
}

}  // namespace nst
