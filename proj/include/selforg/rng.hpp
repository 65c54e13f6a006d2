// Copyright 2026 The selforg Authors
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

#pragma once

// Counter-based random streams. Draw k of stream (seed, index) is
// splitmix64_mix(key + (k + 1) * golden) with key = mix(seed ^ mix(index)),
// so every trajectory owns an independent, order-free sequence.

#include <cstdint>
#include <string_view>

namespace selforg {

class CounterRng {
 public:
  static constexpr std::string_view algorithm = "splitmix64-counter/v1";

  CounterRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  /// Uniform in the open interval (0, 1).
  double uniform();
  std::uint64_t counter() const { return counter_; }

  static std::uint64_t mix(std::uint64_t z);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace selforg
