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

#include <doctest.h>

#include <cmath>
#include <set>

#include "litterkit/rng.hpp"

using litterkit::SplitMix64;

TEST_CASE("splitmix64 matches the published reference sequence")
{
  SplitMix64 zero(0);
  CHECK(zero.next() == 0xE220A8397B1DCDAFULL);

  SplitMix64 rng(1234567);
  const std::uint64_t expected[] = {
    6457827717110365317ULL, 3203168211198807973ULL, 9817491932198370423ULL, 4593380528125082431ULL,
    16408922859458223821ULL};
  for (const auto e : expected) {
    CHECK(rng.next() == e);
  }
}

TEST_CASE("streams are reproducible and distinct")
{
  auto a = SplitMix64::stream(7, 3);
  auto b = SplitMix64::stream(7, 3);
  for (int i = 0; i < 100; ++i) {
    CHECK(a.next() == b.next());
  }
  std::set<std::uint64_t> firsts;
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    for (std::uint64_t index = 0; index < 64; ++index) {
      firsts.insert(SplitMix64::stream(seed, index).next());
    }
  }
  CHECK(firsts.size() == 8 * 64);
}

TEST_CASE("uniform stays in [0, 1) and has the right mean")
{
  SplitMix64 rng(42);
  double sum = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("uniform_int covers the closed range evenly")
{
  SplitMix64 rng(5);
  int hist[7] = {};
  for (int i = 0; i < 70000; ++i) {
    const auto v = rng.uniform_int(-3, 3);
    REQUIRE(v >= -3);
    REQUIRE(v <= 3);
    ++hist[v + 3];
  }
  for (const int h : hist) {
    CHECK(h == doctest::Approx(10000).epsilon(0.05));
  }
  CHECK(rng.uniform_int(4, 4) == 4);
}

TEST_CASE("normal has zero mean and unit variance")
{
  SplitMix64 rng(11);
  const int n = 200000;
  double sum = 0, sq = 0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    REQUIRE(std::isfinite(z));
    sum += z;
    sq += z * z;
  }
  const double mean = sum / n;
  CHECK(std::fabs(mean) < 0.01);
  CHECK(sq / n - mean * mean == doctest::Approx(1.0).epsilon(0.02));
}
