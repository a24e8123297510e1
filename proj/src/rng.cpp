// Copyright 2026 The LitterKit Authors
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

#include "litterkit/rng.hpp"

#include <cmath>
#include <limits>

namespace litterkit
{

namespace
{
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix(std::uint64_t z) noexcept
{
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}
}  // namespace

SplitMix64 SplitMix64::stream(std::uint64_t seed, std::uint64_t index) noexcept
{
  return SplitMix64(mix(seed + kGolden) ^ mix(index * kGolden + 0xD1B54A32D192ED03ULL));
}

std::uint64_t SplitMix64::next() noexcept
{
  state_ += kGolden;
  return mix(state_);
}

double SplitMix64::uniform() noexcept
{
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double SplitMix64::uniform(double lo, double hi) noexcept
{
  return lo + (hi - lo) * uniform();
}

std::int64_t SplitMix64::uniform_int(std::int64_t lo, std::int64_t hi) noexcept
{
  if (hi <= lo) {
    return lo;
  }
  const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
  if (range == 0) {
    return static_cast<std::int64_t>(next());
  }
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t x = next();
  while (x >= limit) {
    x = next();
  }
  return lo + static_cast<std::int64_t>(x % range);
}

double SplitMix64::normal() noexcept
{
  if (spare_normal_) {
    const double v = *spare_normal_;
    spare_normal_.reset();
    return v;
  }
  // 1 - uniform() lies in (0, 1], keeping log finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  spare_normal_ = r * std::sin(theta);
  return r * std::cos(theta);
}

}  // namespace litterkit
