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

#include "fixtures.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

namespace litterkit::testing
{

namespace fs = std::filesystem;

TempDir::TempDir(const std::string & tag)
{
  static std::atomic<int> counter{0};
  path_ = fs::temp_directory_path() /
          ("litterkit_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
  fs::remove_all(path_);
  fs::create_directories(path_);
}

TempDir::~TempDir()
{
  std::error_code ec;
  fs::remove_all(path_, ec);
}

fs::path data_dir()
{
  return LITTERKIT_TEST_DATA;
}

Dataset mini_dataset()
{
  return load_dataset(data_dir() / "mini.json");
}

Annotation rect_annotation(
  std::int64_t id, std::int64_t image_id, std::int64_t category_id, int x, int y, int w, int h)
{
  Annotation a;
  a.id = id;
  a.image_id = image_id;
  a.category_id = category_id;
  const double x0 = x, y0 = y, x1 = x + w, y1 = y + h;
  a.segmentation = PolygonList{{x0, y0, x1, y0, x1, y1, x0, y1}};
  a.bbox = {x0, y0, static_cast<double>(w), static_cast<double>(h)};
  a.area = static_cast<double>(w) * h;
  return a;
}

Annotation mask_annotation(std::int64_t id, std::int64_t image_id, std::int64_t category_id, const BinaryMask & mask)
{
  Annotation a;
  a.id = id;
  a.image_id = image_id;
  a.category_id = category_id;
  a.segmentation = encode_rle(mask);
  const auto r = tight_bounds(mask);
  if (!r) {
    throw std::invalid_argument("mask_annotation needs a non-empty mask");
  }
  a.bbox = {double(r->x0), double(r->y0), double(r->x1 - r->x0), double(r->y1 - r->y0)};
  a.area = static_cast<double>(mask.count());
  return a;
}

BinaryMask rect_mask(int width, int height, int x, int y, int w, int h)
{
  BinaryMask m(width, height);
  for (int yy = std::max(0, y); yy < std::min(height, y + h); ++yy) {
    for (int xx = std::max(0, x); xx < std::min(width, x + w); ++xx) {
      m.bits[static_cast<std::size_t>(yy) * width + xx] = 1;
    }
  }
  return m;
}

BinaryMask random_mask(int width, int height, double density, SplitMix64 & rng)
{
  BinaryMask m(width, height);
  for (auto & b : m.bits) {
    b = rng.uniform() < density ? 1 : 0;
  }
  return m;
}

BinaryMask random_blobs(int width, int height, int count, SplitMix64 & rng)
{
  BinaryMask m(width, height);
  for (int i = 0; i < count; ++i) {
    const int w = static_cast<int>(rng.uniform_int(1, std::max(1, width / 2)));
    const int h = static_cast<int>(rng.uniform_int(1, std::max(1, height / 2)));
    const int x = static_cast<int>(rng.uniform_int(0, width - w));
    const int y = static_cast<int>(rng.uniform_int(0, height - h));
    const BinaryMask r = rect_mask(width, height, x, y, w, h);
    for (std::size_t k = 0; k < m.bits.size(); ++k) {
      m.bits[k] |= r.bits[k];
    }
  }
  return m;
}

std::vector<double> random_convex_polygon(SplitMix64 & rng, int width, int height)
{
  const double cx = rng.uniform(0.2 * width, 0.8 * width);
  const double cy = rng.uniform(0.2 * height, 0.8 * height);
  const double r = rng.uniform(2.0, 0.4 * std::min(width, height));
  const int n = static_cast<int>(rng.uniform_int(3, 9));
  std::vector<double> angles;
  for (int i = 0; i < n; ++i) angles.push_back(rng.uniform(0.0, 2 * std::numbers::pi));
  std::sort(angles.begin(), angles.end());
  std::vector<double> xy;
  for (const double a : angles) {
    xy.push_back(cx + r * std::cos(a));
    xy.push_back(cy + r * std::sin(a));
  }
  return xy;
}

Image synthetic_image(int width, int height, std::uint64_t seed)
{
  SplitMix64 rng(seed);
  const int base_r = static_cast<int>(rng.uniform_int(0, 128));
  const int base_g = static_cast<int>(rng.uniform_int(0, 128));
  const int base_b = static_cast<int>(rng.uniform_int(0, 128));
  Image img(width, height, 3);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const int jitter = static_cast<int>(rng.uniform_int(0, 15));
      img.at(x, y, 0) = static_cast<std::uint8_t>(std::min(255, base_r + 2 * x + jitter));
      img.at(x, y, 1) = static_cast<std::uint8_t>(std::min(255, base_g + 2 * y + jitter));
      img.at(x, y, 2) = static_cast<std::uint8_t>(std::min(255, base_b + x + y));
    }
  }
  return img;
}

Dataset synthetic_dataset(const SyntheticSpec & spec)
{
  SplitMix64 rng(spec.seed);
  Dataset d;
  for (std::size_t c = 0; c < spec.categories.size(); ++c) {
    d.categories.push_back({static_cast<std::int64_t>(c + 1), spec.categories[c].first, spec.categories[c].second});
  }
  d.scene_tags = {{1, "Sand, dirt, pebbles"}, {2, "Vegetation"}, {3, "Pavement"}};
  std::int64_t next_ann = 1;
  for (int i = 0; i < spec.images; ++i) {
    const std::int64_t image_id = i + 1;
    d.images.push_back({image_id, "img_" + std::to_string(image_id) + ".png", spec.width, spec.height});
    d.scene_assignments.push_back({image_id, 1 + static_cast<std::int64_t>(rng.uniform_int(0, 2))});
    const int objects = static_cast<int>(rng.uniform_int(1, spec.max_objects));
    for (int k = 0; k < objects; ++k) {
      const auto cat = static_cast<std::int64_t>(rng.uniform_int(1, static_cast<std::int64_t>(spec.categories.size())));
      const int w = static_cast<int>(rng.uniform_int(4, spec.width / 3));
      const int h = static_cast<int>(rng.uniform_int(4, spec.height / 3));
      const int x = static_cast<int>(rng.uniform_int(0, spec.width - w));
      const int y = static_cast<int>(rng.uniform_int(0, spec.height - h));
      if (rng.uniform() < 0.5) {
        d.annotations.push_back(rect_annotation(next_ann++, image_id, cat, x, y, w, h));
      } else {
        // An L-shaped object stored as RLE.
        BinaryMask m = rect_mask(spec.width, spec.height, x, y, w, h);
        const BinaryMask notch = rect_mask(spec.width, spec.height, x + w / 2, y, w - w / 2, h / 2);
        for (std::size_t p = 0; p < m.bits.size(); ++p) {
          m.bits[p] &= static_cast<std::uint8_t>(!notch.bits[p]);
        }
        d.annotations.push_back(mask_annotation(next_ann++, image_id, cat, m));
      }
    }
  }
  return d;
}

void write_images(const Dataset & d, const fs::path & root, std::uint64_t seed)
{
  fs::create_directories(root);
  for (const auto & rec : d.images) {
    write_png(synthetic_image(rec.width, rec.height, seed + static_cast<std::uint64_t>(rec.id)), root / rec.file_name);
  }
}

Dataset dataset_with_supercategory_counts(const std::vector<std::pair<std::string, int>> & counts)
{
  Dataset d;
  std::int64_t next_cat = 1;
  std::int64_t next_ann = 1;
  for (const auto & [super, n] : counts) {
    const std::int64_t a = next_cat++;
    const std::int64_t b = next_cat++;
    d.categories.push_back({a, super + " A", super});
    d.categories.push_back({b, super + " B", super});
    for (int i = 0; i < n; ++i) {
      const std::int64_t image_id = next_ann;
      d.images.push_back({image_id, "c" + std::to_string(image_id) + ".png", 8, 8});
      d.annotations.push_back(rect_annotation(next_ann++, image_id, i % 2 ? b : a, 1, 1, 4, 4));
    }
  }
  return d;
}

std::string read_file(const fs::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot read " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace litterkit::testing
