// Copyright 2026 The camplace Authors.
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

#ifndef CAMPLACE_HASH_HPP_
#define CAMPLACE_HASH_HPP_

#include <bit>
#include <cstdint>
#include <cstdio>
#include <span>
#include <string>
#include <string_view>

namespace camplace {

// 64-bit FNV-1a over a canonical little-endian byte stream. Used for
// provenance tags, not for security.
class Fnv1a {
 public:
  Fnv1a& bytes(std::span<const std::uint8_t> data) {
    for (std::uint8_t b : data) {
      state_ ^= b;
      state_ *= 0x100000001b3ULL;
    }
    return *this;
  }
  Fnv1a& u64(std::uint64_t v) {
    std::uint8_t buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<std::uint8_t>(v >> (8 * i));
    return bytes(buf);
  }
  Fnv1a& i64(std::int64_t v) { return u64(static_cast<std::uint64_t>(v)); }
  Fnv1a& f64(double v) { return u64(std::bit_cast<std::uint64_t>(v == 0.0 ? 0.0 : v)); }
  Fnv1a& str(std::string_view s) {
    u64(s.size());
    return bytes({reinterpret_cast<const std::uint8_t*>(s.data()), s.size()});
  }
  std::uint64_t digest() const { return state_; }

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

inline std::string hash_to_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace camplace

#endif  // CAMPLACE_HASH_HPP_
