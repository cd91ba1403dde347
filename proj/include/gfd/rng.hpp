// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

namespace gfd {

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Decorrelated engine seed for the given stream index.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed + 0x9e3779b97f4a7c15ULL * (stream + 1));
}

}  // namespace gfd
