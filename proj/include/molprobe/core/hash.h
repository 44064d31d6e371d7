//
// Project MolProbe - Copyright 2026 MolProbe Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLPROBE_CORE_HASH_H_
#define MOLPROBE_CORE_HASH_H_

#include <cstdint>
#include <string_view>

#include "molprobe/core/random.h"

namespace molprobe {

constexpr std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t value) {
  return splitmix64(seed ^ (splitmix64(value) + 0x9e3779b97f4a7c15ULL
                            + (seed << 6) + (seed >> 2)));
}

// FNV-1a, stable across platforms and runs.
constexpr std::uint64_t hash_string(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c: s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace molprobe

#endif  // MOLPROBE_CORE_HASH_H_
