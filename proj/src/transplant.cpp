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

#include "litterkit/transplant.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>

#include "litterkit/error.hpp"
#include "litterkit/parallel.hpp"
#include "litterkit/resample.hpp"
#include "litterkit/rng.hpp"

namespace litterkit
{

namespace
{

LocalMask object_mask(const Image & src, const Annotation & ann)
{
  LocalMask mask = rasterize_local(ann.segmentation, src.width, src.height);
  if (mask.area == 0) {
    throw InvalidArgument("annotation " + std::to_string(ann.id) + " has an empty mask");
  }
  return mask;
}

// The object canvas is the mask's bounding box, so the mask touches its
// edges. Pad with background before the distance transform so that those
// edges feather like any other part of the silhouette.
SoftMask padded_soft_mask(const BinaryMask & mask, double radius)
{
  const int margin = static_cast<int>(std::ceil(radius)) + 1;
  BinaryMask padded(mask.width + 2 * margin, mask.height + 2 * margin);
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      padded.at(x + margin, y + margin) = mask.at(x, y);
    }
  }
  const SoftMask full = soft_mask(padded, radius);
  SoftMask out{mask.width, mask.height, std::vector<double>(mask.bits.size())};
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      out.alpha[static_cast<std::size_t>(y) * mask.width + x] = full.at(x + margin, y + margin);
    }
  }
  return out;
}

}  // namespace

std::pair<int, int> transformed_size(const Image & src, const Annotation & ann, double scale, double rotation)
{
  const LocalMask mask = object_mask(src, ann);
  const CenteredTransform t(mask.rect.width(), mask.rect.height(), scale, rotation);
  return {t.out_width(), t.out_height()};
}

TransformedObject transform_object(const Image & src, const Annotation & ann, double scale, double rotation)
{
  const LocalMask local = object_mask(src, ann);
  const PixelRect & r = local.rect;
  const CenteredTransform t(r.width(), r.height(), scale, rotation);

  TransformedObject out{Image(t.out_width(), t.out_height(), src.channels), BinaryMask(t.out_width(), t.out_height())};
  for (int v = 0; v < t.out_height(); ++v) {
    for (int u = 0; u < t.out_width(); ++u) {
      const auto [sx, sy] = t.source_of(u, v);
      for (int c = 0; c < src.channels; ++c) {
        const double value = sample_bilinear(src, sx + r.x0, sy + r.y0, c);
        out.patch.at(u, v, c) = static_cast<std::uint8_t>(std::clamp(std::floor(value + 0.5), 0.0, 255.0));
      }
      out.mask.at(u, v) = sample_bilinear(local.mask, sx, sy) >= 0.5 ? 1 : 0;
    }
  }
  return out;
}

TransplantResult transplant_one(const Image & src, const Annotation & ann, const Image & dst, const Placement & p)
{
  if (!(p.scale > 0)) {
    throw InvalidArgument("placement scale must be positive");
  }
  if (p.soft && !(p.radius > 0)) {
    throw InvalidArgument("placement radius must be positive for soft blending");
  }
  if (src.channels != dst.channels) {
    throw InvalidArgument("source and target images have different channel counts");
  }
  TransformedObject obj = transform_object(src, ann, p.scale, p.rotation);

  BinaryMask placed(dst.width, dst.height);
  for (int v = 0; v < obj.mask.height; ++v) {
    const int ty = p.y + v;
    if (ty < 0 || ty >= dst.height) {
      continue;
    }
    for (int u = 0; u < obj.mask.width; ++u) {
      const int tx = p.x + u;
      if (tx >= 0 && tx < dst.width && obj.mask.at(u, v)) {
        placed.at(tx, ty) = 1;
      }
    }
  }
  const auto bounds = tight_bounds(placed);
  if (!bounds) {
    throw InvalidArgument("transplanted object falls entirely outside the target image");
  }

  TransplantResult result;
  result.alpha = p.soft ? padded_soft_mask(obj.mask, p.radius) : hard_mask(obj.mask);
  result.image = blend(obj.patch, result.alpha, dst, Offset{p.x, p.y});
  result.annotation.category_id = ann.category_id;
  result.annotation.segmentation = encode_rle(placed);
  result.annotation.bbox = BBox{
    static_cast<double>(bounds->x0), static_cast<double>(bounds->y0), static_cast<double>(bounds->width()),
    static_cast<double>(bounds->height())};
  result.annotation.area = static_cast<double>(placed.count());
  return result;
}

TransplantBatch transplant_batch(
  const Dataset & src, const ImageLoader & load_source, std::span<const TargetImage> targets, std::size_t count,
  std::uint64_t seed, const TransplantPolicy & policy)
{
  TransplantBatch batch;
  batch.dataset.categories = src.categories;
  if (count == 0) {
    return batch;
  }
  if (targets.empty()) {
    throw InvalidArgument("transplant needs at least one target image");
  }
  if (src.annotations.empty()) {
    throw InvalidArgument("transplant needs at least one source annotation");
  }
  if (!(policy.min_scale > 0) || policy.max_scale < policy.min_scale) {
    throw InvalidArgument("invalid scale range");
  }
  const DatasetIndex index(src);

  // Source images and object extents, loaded once per referenced image.
  std::map<std::int64_t, Image> sources;
  const auto source_of = [&](const Annotation & a) -> const Image & {
    auto it = sources.find(a.image_id);
    if (it == sources.end()) {
      const ImageRecord * rec = index.image(a.image_id);
      if (!rec) {
        throw IntegrityError("image", a.image_id, "annotation " + std::to_string(a.id));
      }
      it = sources.emplace(a.image_id, load_source(*rec)).first;
    }
    return it->second;
  };
  std::map<std::int64_t, PixelRect> extents;

  struct Draw
  {
    std::size_t annotation;
    std::size_t target;
    Placement placement;
  };
  std::vector<Draw> draws;
  for (std::size_t i = 0; i < count; ++i) {
    auto rng = SplitMix64::stream(seed, i);
    const auto ai = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(src.annotations.size()) - 1));
    const auto ti = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(targets.size()) - 1));
    const Annotation & ann = src.annotations[ai];
    const Image & target = targets[ti].image;

    auto ext = extents.find(ann.id);
    if (ext == extents.end()) {
      const LocalMask m = rasterize_local(ann.segmentation, source_of(ann).width, source_of(ann).height);
      ext = extents.emplace(ann.id, m.rect).first;
    }
    if (ext->second.width() <= 0) {
      batch.warnings.push_back("draw " + std::to_string(i) + ": annotation " + std::to_string(ann.id) + " has an empty mask; skipped");
      continue;
    }

    std::optional<Placement> placement;
    for (int attempt = 0; attempt <= policy.max_retries && !placement; ++attempt) {
      Placement p;
      p.scale = rng.uniform(policy.min_scale, policy.max_scale);
      p.rotation = rng.uniform(-policy.max_rotation, policy.max_rotation);
      p.soft = policy.soft;
      p.radius = policy.radius;
      const CenteredTransform t(ext->second.width(), ext->second.height(), p.scale, p.rotation);
      if (t.out_width() > target.width || t.out_height() > target.height) {
        continue;
      }
      p.x = static_cast<int>(rng.uniform_int(0, target.width - t.out_width()));
      p.y = static_cast<int>(rng.uniform_int(0, target.height - t.out_height()));
      placement = p;
    }
    if (!placement) {
      batch.warnings.push_back(
        "draw " + std::to_string(i) + ": annotation " + std::to_string(ann.id) + " does not fit target '" +
        targets[ti].name + "' after " + std::to_string(policy.max_retries) + " retries; skipped");
      continue;
    }
    draws.push_back({ai, ti, *placement});
  }

  std::vector<TransplantResult> results(draws.size());
  parallel_for(draws.size(), [&](std::size_t i) {
    const Draw & d = draws[i];
    const Annotation & ann = src.annotations[d.annotation];
    results[i] = transplant_one(sources.at(ann.image_id), ann, targets[d.target].image, d.placement);
  });

  for (std::size_t i = 0; i < draws.size(); ++i) {
    const auto id = static_cast<std::int64_t>(i) + 1;
    char name[64];
    std::snprintf(name, sizeof(name), "transplant_%06lld.png", static_cast<long long>(id));
    ImageRecord rec;
    rec.id = id;
    rec.file_name = name;
    rec.width = results[i].image.width;
    rec.height = results[i].image.height;
    batch.dataset.images.push_back(std::move(rec));

    Annotation ann = std::move(results[i].annotation);
    ann.id = id;
    ann.image_id = id;
    batch.dataset.annotations.push_back(std::move(ann));
    batch.images.push_back(std::move(results[i].image));
  }
  return batch;
}

}  // namespace litterkit
