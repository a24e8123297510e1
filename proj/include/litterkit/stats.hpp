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

#include <array>
#include <string>
#include <vector>

#include "litterkit/dataset.hpp"
#include "litterkit/taxonomy.hpp"

namespace litterkit
{

struct HistogramRow
{
  std::vector<std::string> labels;
  std::vector<double> values;

  bool operator==(const HistogramRow &) const = default;
};

/// A labelled table of counts or proportions; one label column set and one
/// value column set, emitted as CSV.
struct HistogramTable
{
  std::vector<std::string> label_columns;
  std::vector<std::string> value_columns;
  std::vector<HistogramRow> rows;

  /// RFC 4180, header row first, CRLF line endings.
  std::string to_csv() const;
  bool operator==(const HistogramTable &) const = default;
};

enum class CategoryLevel { Category, Supercategory };

/// Annotation count per category (or supercategory) name, descending,
/// ties by name. Labels with no annotations are omitted.
HistogramTable category_counts(const Dataset & d, CategoryLevel level);

/// (width, height) -> image count, plus megapixels, sorted by count then size.
HistogramTable resolution_distribution(const Dataset & d);

/// Per scene tag: number of images carrying it and the fraction of all
/// images. Tags are multi-label, so fractions can sum above 1.
HistogramTable scene_tag_proportions(const Dataset & d);

/// Upper edges of the side-length bins; the last bin is open.
inline constexpr std::array<double, 5> kBBoxSideEdges{16, 32, 64, 128, 256};

/// Index of the bin holding side length s = sqrt(w * h).
std::size_t bbox_side_bin(double side);

/// Per task class, annotation counts in side-length bins
/// [0,16) [16,32) [32,64) [64,128) [128,256) [256,inf).
HistogramTable bbox_size_histogram(const Dataset & d, const TaxonomyMapping & m);

}  // namespace litterkit
