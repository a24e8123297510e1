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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "litterkit/image.hpp"
#include "litterkit/segmentation.hpp"

namespace litterkit
{

/// Row-major foreground flags (0 or 1).
struct BinaryMask
{
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;

  BinaryMask() = default;
  BinaryMask(int w, int h) : width(w), height(h), bits(static_cast<std::size_t>(w) * h, 0) {}

  std::uint8_t & at(int x, int y) { return bits[static_cast<std::size_t>(y) * width + x]; }
  std::uint8_t at(int x, int y) const { return bits[static_cast<std::size_t>(y) * width + x]; }
  std::size_t count() const;

  bool operator==(const BinaryMask &) const = default;
};

/// Euclidean distance of each pixel centre to the nearest background pixel
/// centre; 0 on background.
struct DistanceField
{
  int width = 0;
  int height = 0;
  std::vector<double> values;

  double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
};

/// Per-pixel opacity in [0, 1].
struct SoftMask
{
  int width = 0;
  int height = 0;
  std::vector<double> alpha;

  double at(int x, int y) const { return alpha[static_cast<std::size_t>(y) * width + x]; }
};

/// Half-open pixel rectangle [x0, x1) x [y0, y1).
struct PixelRect
{
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;

  int width() const { return x1 - x0; }
  int height() const { return y1 - y0; }
  bool operator==(const PixelRect &) const = default;
};

struct Offset
{
  int x = 0;
  int y = 0;
};

/// Polygons are filled with the even-odd rule by testing pixel centres and
/// unioned; RLEs are decoded exactly. Throws InvalidArgument if an RLE's size
/// or run sum disagrees with width x height.
BinaryMask rasterize(const Segmentation & seg, int width, int height);
BinaryMask rasterize_polygons(const PolygonList & polygons, int width, int height);

BinaryMask decode_rle(const Rle & rle);
Rle encode_rle(const BinaryMask & mask);

/// Tight bounds of the foreground, or nullopt for an empty mask.
std::optional<PixelRect> tight_bounds(const BinaryMask & mask);
BinaryMask crop(const BinaryMask & mask, const PixelRect & rect);

/// |a & b| / |a | b|, 0 when both are empty. Throws on size mismatch.
double mask_iou(const BinaryMask & a, const BinaryMask & b);

/// A mask stored over its tight bounds only, inside a frame of
/// frame_width x frame_height pixels. Empty masks have an empty rect.
struct LocalMask
{
  int frame_width = 0;
  int frame_height = 0;
  PixelRect rect;
  BinaryMask mask;
  std::size_t area = 0;
};

/// Same pixels as rasterize(), without materialising the full frame for
/// polygons.
LocalMask rasterize_local(const Segmentation & seg, int width, int height);
LocalMask make_local(const BinaryMask & mask);
/// Equals mask_iou of the two expanded masks.
double local_iou(const LocalMask & a, const LocalMask & b);

/// Exact Euclidean distance transform by the separable lower-envelope method
/// (Felzenszwalb & Huttenlocher). Pixels outside the image are not background;
/// a mask with no background at all yields width + height everywhere.
DistanceField distance_transform(const BinaryMask & mask);

inline constexpr double kDefaultSoftRadius = 3.0;

/// alpha = min(distance / radius, 1). Throws InvalidArgument if radius <= 0.
SoftMask soft_mask(const BinaryMask & mask, double radius = kDefaultSoftRadius);
/// alpha = mask bit.
SoftMask hard_mask(const BinaryMask & mask);

/// Composites src over dst with src's top-left at `offset`:
/// out = alpha * src + (1 - alpha) * dst, rounded half-up to 8 bits.
/// Source pixels falling outside dst are dropped. src and alpha must have
/// equal dimensions and src/dst equal channel counts.
Image blend(const Image & src, const SoftMask & alpha, const Image & dst, Offset offset);

}  // namespace litterkit
