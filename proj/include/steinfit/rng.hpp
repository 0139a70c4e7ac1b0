#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

namespace steinfit {

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// 64-bit FNV-1a, used to key streams by names (alternative labels etc.).
constexpr std::uint64_t fnv1a64(std::string_view text) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Counter-based random stream.
///
/// The pair (seed, stream_id) is hashed into a 64-bit key; the i-th output
/// is mix64(key + i * golden). Streams are therefore random-access, carry no
/// hidden state beyond the counter, and can be split without coordination:
/// `substream(j)` derives a child key from (stream_id, j).
///
/// Satisfies the UniformRandomBitGenerator requirements.
class RngStream {
public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept
      : seed_(seed), stream_id_(stream_id),
        key_(mix64(seed ^ mix64(stream_id ^ 0x6a09e667f3bcc909ULL))) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    return mix64(key_ + 0x9e3779b97f4a7c15ULL * counter_++);
  }

  /// Uniform variate on the open interval (0, 1), 53-bit resolution.
  double uniform() noexcept {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  [[nodiscard]] RngStream substream(std::uint64_t index) const noexcept {
    return {seed_, mix64(stream_id_ ^ mix64(index + 0x3c6ef372fe94f82bULL))};
  }

  [[nodiscard]] RngStream substream(std::string_view label) const noexcept {
    return substream(fnv1a64(label));
  }

  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
  [[nodiscard]] std::uint64_t stream_id() const noexcept { return stream_id_; }
  [[nodiscard]] std::uint64_t draws() const noexcept { return counter_; }

  /// Identifies the stream (not its position) for provenance records.
  [[nodiscard]] std::uint64_t fingerprint() const noexcept { return key_; }

private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

} // namespace steinfit
