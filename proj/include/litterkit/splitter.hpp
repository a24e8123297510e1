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

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "litterkit/dataset.hpp"

namespace litterkit
{

struct SplitFractions
{
  double train = 0.8;
  double val = 0.1;
  double test = 0.1;
};

enum class SplitPart { Train, Val, Test };

std::string_view part_name(SplitPart part);

/// One fold: disjoint image-id sets covering the whole dataset, each sorted.
struct Split
{
  int fold_index = 0;
  std::vector<std::int64_t> train;
  std::vector<std::int64_t> val;
  std::vector<std::int64_t> test;

  bool operator==(const Split &) const = default;
};

/// k independent seeded shuffles of the image ids. Validation and test take
/// floor(n * fraction) images each and training keeps the remainder. Folds
/// are NOT a partition of the dataset; each is its own random split.
std::vector<Split> kfold_splits(const Dataset & d, int k, const SplitFractions & fractions, std::uint64_t seed);

/// "<image_id> <train|val|test>" per line, ascending image id.
std::string format_split(const Split & split);
Split parse_split(std::string_view text, int fold_index = 0);

/// Images in `image_ids` plus their annotations and scene assignments.
Dataset subset(const Dataset & d, const std::vector<std::int64_t> & image_ids);

}  // namespace litterkit
