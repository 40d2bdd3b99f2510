#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <limits>

namespace icx {

/// SplitMix64 finalizer. Used to fold (seed, index...) tuples into stream ids.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Folds a path of indices into a single 64-bit identifier.
constexpr std::uint64_t derive_id(std::initializer_list<std::uint64_t> path) noexcept {
  std::uint64_t h = 0x6a09e667f3bcc908ULL;
  for (auto v : path) h = mix64(h ^ mix64(v));
  return h;
}

/// Counter-based generator (Philox4x32-10).
///
/// A stream is fully determined by (key, stream id); the position within the
/// stream is a block counter. Two streams with different ids never share
/// blocks, so replicate b of a bootstrap can be generated on any thread in
/// any order and produce the same values.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  RandomStream(std::uint64_t key, std::uint64_t stream_id) noexcept
      : key_{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)},
        stream_{static_cast<std::uint32_t>(stream_id),
                static_cast<std::uint32_t>(stream_id >> 32)} {}

  /// Child stream keyed by this stream's key and a derived id.
  [[nodiscard]] RandomStream substream(std::uint64_t index) const noexcept {
    const std::uint64_t key = static_cast<std::uint64_t>(key_[0]) |
                              (static_cast<std::uint64_t>(key_[1]) << 32);
    const std::uint64_t id = static_cast<std::uint64_t>(stream_[0]) |
                             (static_cast<std::uint64_t>(stream_[1]) << 32);
    return RandomStream(key, derive_id({id, index}));
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    if (lane_ == 2) refill();
    const auto lo = static_cast<std::uint64_t>(block_[2 * lane_]);
    const auto hi = static_cast<std::uint64_t>(block_[2 * lane_ + 1]);
    ++lane_;
    return lo | (hi << 32);
  }

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform() noexcept {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal variate (Marsaglia polar method, spare value cached).
  double normal() noexcept;

  /// Uniform integer in [0, bound), bound >= 1. Lemire's rejection method.
  std::uint64_t below(std::uint64_t bound) noexcept;

 private:
  void refill() noexcept;

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 2> stream_;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> block_{};
  unsigned lane_ = 2;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace icx
