// Copyright 2026 The fsqa Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FSQA_HASH_HPP_
#define FSQA_HASH_HPP_

#include <cstdint>
#include <string_view>

namespace fsqa {

// FNV-1a, 64-bit. Used for token hashing and for deriving named RNG
// substreams; must stay byte-for-byte stable across platforms.
inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= static_cast<std::uint64_t>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace fsqa

#endif  // FSQA_HASH_HPP_
