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
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "litterkit/dataset.hpp"
#include "litterkit/image.hpp"
#include "litterkit/mask_ops.hpp"

namespace litterkit
{

/// Where and how a transplanted object lands. (x, y) is the target pixel of
/// the top-left corner of the transformed object's canvas; the canvas is the
/// bounding box of the object's mask bounds after scaling and rotation.
struct Placement
{
  int x = 0;
  int y = 0;
  double scale = 1.0;
  double rotation = 0.0;  // degrees, counter-clockwise as displayed
  bool soft = true;
  double radius = kDefaultSoftRadius;

  bool operator==(const Placement &) const = default;
};

/// The source object after scaling and rotation, before placement.
struct TransformedObject
{
  Image patch;
  BinaryMask mask;  // bilinear mask coverage >= 0.5
};

/// Cuts the object's mask bounds out of `src` and resamples it (image
/// bilinear, mask bilinear then thresholded).
TransformedObject transform_object(const Image & src, const Annotation & ann, double scale, double rotation);

/// Size of the transformed canvas without resampling any pixels.
std::pair<int, int> transformed_size(const Image & src, const Annotation & ann, double scale, double rotation);

struct TransplantResult
{
  Image image;
  /// RLE of the placed binary mask over the target; bbox and area are
  /// recomputed. id and image_id are left for the caller to assign.
  Annotation annotation;
  SoftMask alpha;
};

/// Throws InvalidArgument when the placed object misses the target entirely.
TransplantResult transplant_one(const Image & src, const Annotation & ann, const Image & dst, const Placement & p);

struct TransplantPolicy
{
  double min_scale = 0.5;
  double max_scale = 1.5;
  double max_rotation = 45.0;
  bool soft = true;
  double radius = kDefaultSoftRadius;
  int max_retries = 10;
};

struct TargetImage
{
  std::string name;
  Image image;
};

struct TransplantBatch
{
  Dataset dataset;
  /// Composited images, aligned with dataset.images.
  std::vector<Image> images;
  std::vector<std::string> warnings;
};

using ImageLoader = std::function<Image(const ImageRecord &)>;

/// Draws `count` (annotation, target, placement) tuples, each from its own
/// SplitMix64 stream keyed by (seed, index), and composites one object per
/// output image. Objects that cannot fit after `max_retries` redraws of
/// scale and rotation are skipped with a warning.
TransplantBatch transplant_batch(
  const Dataset & src, const ImageLoader & load_source, std::span<const TargetImage> targets, std::size_t count,
  std::uint64_t seed, const TransplantPolicy & policy = {});

}  // namespace litterkit
