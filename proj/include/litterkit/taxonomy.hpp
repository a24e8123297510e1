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
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "litterkit/dataset.hpp"

namespace litterkit
{

/// Source category id -> task class name. Task class ids are positions in
/// `target_classes` starting at 1; background is never a class here.
struct TaxonomyMapping
{
  std::map<std::int64_t, std::string> entries;
  std::vector<std::string> target_classes;

  /// 1-based class id of a target name, or 0 if absent.
  std::int64_t class_id(std::string_view name) const;
  bool operator==(const TaxonomyMapping &) const = default;
};

inline constexpr std::string_view kOtherLitter = "Other Litter";
inline constexpr std::string_view kLitter = "Litter";

/// Keeps the k supercategories with the most annotations (ties by ascending
/// name) as classes and folds every other category into `other_name`. The
/// `other_name` class is appended only when some category falls into it.
TaxonomyMapping build_top_k_mapping(const Dataset & d, int k, std::string_view other_name = kOtherLitter);

/// Every category -> "Litter".
TaxonomyMapping classless_mapping(const Dataset & d);

/// Replaces the categories with the mapping's classes (ids 1..n) and rewrites
/// annotation category ids. Everything else is copied unchanged.
Dataset remap(const Dataset & d, const TaxonomyMapping & m);

/// Two tab-separated columns per line: source category name, target class.
/// Lines are grouped by target class in class order.
std::string export_mapping(const Dataset & d, const TaxonomyMapping & m);
/// Parses export_mapping output against `d`'s category names. Class order is
/// the order of first appearance. Lines starting with '#' are ignored.
TaxonomyMapping import_mapping(const Dataset & d, std::string_view text);

}  // namespace litterkit
