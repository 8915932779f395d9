#pragma once

#include <bit>
#include <concepts>
#include <cstdint>
#include <initializer_list>

namespace ersketch {

/// Stateless 64-bit finalizer (SplitMix64 output function).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

/// Counter-based generator: draw k of a stream is mix64(key + k * gamma).
///
/// Streams are addressed by a key derived from (seed, path...), so any task
/// can reconstruct its randomness without coordinating with other tasks.
/// This is what makes sketch construction reproducible regardless of how
/// vertices are spread over worker threads.
class CounterRng {
 public:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
  static constexpr std::uint64_t kGammaInverse = [] {
    std::uint64_t x = kGamma;  // Newton iteration for the inverse mod 2^64
    for (int i = 0; i < 6; ++i) x *= 2 - kGamma * x;
    return x;
  }();
  static_assert(kGamma * kGammaInverse == 1);

  constexpr explicit CounterRng(std::uint64_t key) noexcept : key_(key) {}

  /// Derive an independent stream from a seed and a path of identifiers.
  static constexpr CounterRng stream(std::uint64_t seed,
                                     std::initializer_list<std::uint64_t> path) noexcept {
    return CounterRng(derive_key(seed, path));
  }

  static constexpr std::uint64_t derive_key(std::uint64_t seed,
                                            std::initializer_list<std::uint64_t> path) noexcept {
    std::uint64_t key = mix64(seed ^ 0x6a09e667f3bcc909ULL);
    for (std::uint64_t id : path) key = extend(key, id);
    return key;
  }

  /// One more path step: derive_key(s, {a..., id}) == extend(derive_key(s, {a...}), id).
  static constexpr std::uint64_t extend(std::uint64_t key, std::uint64_t id) noexcept {
    return mix64(key + kGamma * (id + 1));
  }

  constexpr std::uint64_t next_u64() noexcept {
    state_ += kGamma;  // == key + draws * gamma
    return mix64(state_);
  }

  /// Skip k draws without computing them.
  constexpr void discard(std::uint64_t k) noexcept { state_ += k * kGamma; }

  /// Uniform double in [0, 1) with 53 random bits.
  constexpr double uniform01() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, bound); bound > 0.
  std::uint64_t below(std::uint64_t bound) noexcept {
    __extension__ using u128 = unsigned __int128;
    const u128 product = static_cast<u128>(next_u64()) * static_cast<u128>(bound);
    return static_cast<std::uint64_t>(product >> 64);
  }

  /// Binomial(trials, 1/2) sample: popcount of `trials` fair bits.
  std::uint64_t fair_coin_count(std::uint64_t trials) noexcept {
    std::uint64_t heads = 0;
    while (trials >= 64) {
      heads += static_cast<std::uint64_t>(std::popcount(next_u64()));
      trials -= 64;
    }
    if (trials > 0) {
      const std::uint64_t mask = (std::uint64_t{1} << trials) - 1;
      heads += static_cast<std::uint64_t>(std::popcount(next_u64() & mask));
    }
    return heads;
  }

  constexpr std::uint64_t key() const noexcept { return key_; }
  constexpr std::uint64_t draws() const noexcept { return (state_ - key_) * kGammaInverse; }

 private:
  std::uint64_t key_;
  std::uint64_t state_ = key_;
};

/// Anything that can hand out uniform doubles in [0,1). Tests substitute stubs.
template <class R>
concept UniformSource = requires(R& r) {
  { r.uniform01() } -> std::convertible_to<double>;
};

}  // namespace ersketch
