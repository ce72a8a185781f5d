#include "igid/rng.hpp"

namespace igid {

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Xoshiro256pp::Xoshiro256pp(std::uint64_t seed) noexcept {
  std::uint64_t sm = seed;
  for (auto& word : s_) word = splitmix64(sm);
}

RandomStream RandomStream::substream(std::uint64_t master_seed, StreamTag tag,
                                     std::uint64_t index) {
  // Three rounds of SplitMix64 absorb (seed, tag, index) into one 64-bit key.
  std::uint64_t state = master_seed;
  std::uint64_t key = splitmix64(state);
  state = key ^ static_cast<std::uint64_t>(tag);
  key = splitmix64(state);
  state = key ^ index;
  key = splitmix64(state);
  return RandomStream(key);
}

}  // namespace igid
