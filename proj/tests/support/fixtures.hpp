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
#include <utility>
#include <vector>

#include "litterkit/dataset.hpp"
#include "litterkit/image.hpp"
#include "litterkit/mask_ops.hpp"
#include "litterkit/rng.hpp"

namespace litterkit::testing
{

/// Scratch directory removed on destruction.
class TempDir
{
public:
  explicit TempDir(const std::string & tag);
  ~TempDir();
  TempDir(const TempDir &) = delete;
  TempDir & operator=(const TempDir &) = delete;

  const std::filesystem::path & path() const { return path_; }
  std::filesystem::path operator/(const std::string & name) const { return path_ / name; }

private:
  std::filesystem::path path_;
};

std::filesystem::path data_dir();
Dataset mini_dataset();

/// Axis-aligned rectangle covering pixels [x, x+w) x [y, y+h) exactly.
Annotation rect_annotation(
  std::int64_t id, std::int64_t image_id, std::int64_t category_id, int x, int y, int w, int h);
/// RLE annotation with bbox and area taken from the mask.
Annotation mask_annotation(std::int64_t id, std::int64_t image_id, std::int64_t category_id, const BinaryMask & mask);

BinaryMask rect_mask(int width, int height, int x, int y, int w, int h);
/// Independent pixels with probability `density`.
BinaryMask random_mask(int width, int height, double density, SplitMix64 & rng);
/// Union of a few random rectangles.
BinaryMask random_blobs(int width, int height, int count, SplitMix64 & rng);

/// Vertices (x0, y0, x1, y1, ...) of a random convex polygon inside the frame.
std::vector<double> random_convex_polygon(SplitMix64 & rng, int width, int height);

/// Smooth colour gradient with per-pixel jitter, different for every seed.
Image synthetic_image(int width, int height, std::uint64_t seed);

struct SyntheticSpec
{
  int images = 20;
  int width = 64;
  int height = 48;
  int max_objects = 3;
  /// (name, supercategory) pairs; categories get ids 1..n.
  std::vector<std::pair<std::string, std::string>> categories{
    {"Glass bottle", "Bottle"}, {"Drink can", "Can"}, {"Cigarette", "Cigarette"}, {"Paper cup", "Cup"}};
  std::uint64_t seed = 1;
};

/// Images with rectangular and RLE objects whose bbox and area are exact.
Dataset synthetic_dataset(const SyntheticSpec & spec);
/// Writes synthetic_image() for every record under `root`.
void write_images(const Dataset & d, const std::filesystem::path & root, std::uint64_t seed = 99);

/// One 8x8 image per annotation; supercategory i gets the listed number of
/// annotations spread over two categories ("<super> A", "<super> B").
Dataset dataset_with_supercategory_counts(const std::vector<std::pair<std::string, int>> & counts);

std::string read_file(const std::filesystem::path & path);

}  // namespace litterkit::testing
