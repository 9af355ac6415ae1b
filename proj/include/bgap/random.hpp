#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

namespace bgap {

/// 64-bit FNV-1a. Stable across platforms, unlike std::hash.
constexpr std::uint64_t fnv1a(std::string_view text) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// splitmix64 finalizer applied to a ^ rot(b).
constexpr std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) noexcept {
  std::uint64_t z = a ^ (b * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e5f5ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Stream tags separating the independent random draws made for one sentence.
enum class Stream : std::uint64_t {
  scores = 1,
  tiebreak = 2,
  tree = 3,
};

/// Which language a draw belongs to; L and L' get distinct streams unless
/// seeds are paired explicitly.
enum class Side : std::uint64_t {
  original = 0x4c,
  reversed = 0x4c27,
};

/// Per-sentence seed: base ^ fnv1a(id), then mixed with side and stream tags.
/// Independent of processing order, so parallel runs reproduce serial ones.
constexpr std::uint64_t sentence_seed(std::uint64_t base, std::string_view sentence_id,
                                      Side side, Stream stream) noexcept {
  return mix_seed(mix_seed(base ^ fnv1a(sentence_id), static_cast<std::uint64_t>(side)),
                  static_cast<std::uint64_t>(stream));
}

/// Seeded generator with platform-independent real and integer draws.
/// std::uniform_real_distribution is implementation-defined, so draws are
/// built directly from the mt19937_64 output.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double low, double high) { return low + (high - low) * uniform01(); }

  /// Uniform integer in [0, n); n must be positive.
  std::size_t below(std::size_t n) {
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return static_cast<std::size_t>(x % bound);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace bgap
