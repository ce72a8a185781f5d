#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace igid {

// xoshiro256++ (Blackman & Vigna). Satisfies UniformRandomBitGenerator.
class Xoshiro256pp {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256pp(std::uint64_t seed = 0) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4];
};

std::uint64_t splitmix64(std::uint64_t& state) noexcept;

// Domain tags keep streams of different experiments disjoint under one seed.
enum class StreamTag : std::uint64_t {
  kGeneric = 0,
  kIgSample = 1,
  kFptIncrements = 2,
  kFptBridge = 3,
  kType1 = 4,
  kType2 = 5,
  kPacking = 6,
  kDensity = 7,
  kPairDirection = 8,
};

// A random stream owned by exactly one worker. Never share across threads.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  // Stream for trial `index` of experiment `tag`; a pure function of its
  // arguments, so results never depend on scheduling.
  static RandomStream substream(std::uint64_t master_seed, StreamTag tag,
                                std::uint64_t index);

  // Uniform on [0, 1).
  double uniform() noexcept {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  // Uniform on (0, 1).
  double uniform_open() noexcept {
    return (static_cast<double>(engine_() >> 12) + 0.5) * 0x1.0p-52;
  }
  double normal() { return normal_(engine_); }

  Xoshiro256pp& engine() noexcept { return engine_; }

 private:
  Xoshiro256pp engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace igid
