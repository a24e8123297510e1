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

#include "litterkit/augment.hpp"

#include <algorithm>
#include <cmath>

#include "litterkit/error.hpp"
#include "litterkit/mask_ops.hpp"
#include "litterkit/resample.hpp"
#include "litterkit/rng.hpp"

namespace litterkit
{

namespace
{

std::uint8_t to_u8(double v)
{
  return static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
}

int reflect101(int i, int n)
{
  if (n == 1) {
    return 0;
  }
  const int period = 2 * (n - 1);
  i %= period;
  if (i < 0) {
    i += period;
  }
  return i < n ? i : period - i;
}

Annotation with_mask(const Annotation & a, const BinaryMask & mask, const PixelRect & bounds)
{
  Annotation out = a;
  out.segmentation = encode_rle(mask);
  out.bbox = BBox{double(bounds.x0), double(bounds.y0), double(bounds.width()), double(bounds.height())};
  out.area = static_cast<double>(mask.count());
  return out;
}

}  // namespace

std::vector<double> gaussian_kernel(double sigma)
{
  if (!(sigma > 0)) {
    return {1.0};
  }
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0;
  for (int i = -radius; i <= radius; ++i) {
    const double v = std::exp(-(i * i) / (2.0 * sigma * sigma));
    k[static_cast<std::size_t>(i + radius)] = v;
    sum += v;
  }
  for (auto & v : k) {
    v /= sum;
  }
  return k;
}

Image gaussian_blur(const Image & img, double sigma)
{
  if (sigma < 0 || !std::isfinite(sigma)) {
    throw InvalidArgument("gaussian_blur: sigma must be non-negative");
  }
  if (sigma == 0 || img.empty()) {
    return img;
  }
  const std::vector<double> k = gaussian_kernel(sigma);
  const int radius = static_cast<int>(k.size() / 2);
  const int w = img.width;
  const int h = img.height;
  const int ch = img.channels;

  std::vector<float> horizontal(img.data.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < ch; ++c) {
        double acc = 0;
        for (int t = -radius; t <= radius; ++t) {
          acc += k[static_cast<std::size_t>(t + radius)] * img.at(reflect101(x + t, w), y, c);
        }
        horizontal[(static_cast<std::size_t>(y) * w + x) * ch + c] = static_cast<float>(acc);
      }
    }
  }
  Image out(w, h, ch);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < ch; ++c) {
        double acc = 0;
        for (int t = -radius; t <= radius; ++t) {
          acc += k[static_cast<std::size_t>(t + radius)] *
                 horizontal[(static_cast<std::size_t>(reflect101(y + t, h)) * w + x) * ch + c];
        }
        out.at(x, y, c) = to_u8(acc);
      }
    }
  }
  return out;
}

Image awgn(const Image & img, double stddev, std::uint64_t seed)
{
  if (stddev < 0 || !std::isfinite(stddev)) {
    throw InvalidArgument("awgn: stddev must be non-negative");
  }
  if (stddev == 0) {
    return img;
  }
  SplitMix64 rng(seed);
  Image out = img;
  for (auto & v : out.data) {
    v = to_u8(v + stddev * rng.normal());
  }
  return out;
}

Image exposure_contrast(const Image & img, double gain, double bias)
{
  if (!(gain > 0)) {
    throw InvalidArgument("exposure_contrast: gain must be positive");
  }
  Image out = img;
  for (auto & v : out.data) {
    v = to_u8(gain * v + bias);
  }
  return out;
}

AnnotatedImage rotate_with_annotations(const AnnotatedImage & in, double degrees)
{
  const Image & src = in.image;
  const CenteredTransform t(src.width, src.height, 1.0, degrees);
  AnnotatedImage out;
  out.image = Image(t.out_width(), t.out_height(), src.channels);
  for (int v = 0; v < t.out_height(); ++v) {
    for (int u = 0; u < t.out_width(); ++u) {
      const auto [sx, sy] = t.source_of(u, v);
      // Canvas corners outside the source stay black.
      if (sx < 0 || sy < 0 || sx > src.width || sy > src.height) {
        continue;
      }
      for (int c = 0; c < src.channels; ++c) {
        out.image.at(u, v, c) = to_u8(sample_bilinear(src, sx, sy, c));
      }
    }
  }

  for (const auto & a : in.annotations) {
    const LocalMask local = rasterize_local(a.segmentation, src.width, src.height);
    BinaryMask rotated(t.out_width(), t.out_height());
    if (local.area > 0) {
      for (int v = 0; v < t.out_height(); ++v) {
        for (int u = 0; u < t.out_width(); ++u) {
          const auto [sx, sy] = t.source_of(u, v);
          rotated.at(u, v) = sample_nearest(local.mask, sx - local.rect.x0, sy - local.rect.y0);
        }
      }
    }
    if (const auto bounds = tight_bounds(rotated)) {
      out.annotations.push_back(with_mask(a, rotated, *bounds));
    }
  }
  return out;
}

AnnotatedImage crop_around_bbox(const AnnotatedImage & in, CropSize size, std::uint64_t seed)
{
  if (in.annotations.empty()) {
    throw InvalidArgument("crop_around_bbox needs at least one annotation");
  }
  if (size.width <= 0 || size.height <= 0) {
    throw InvalidArgument("crop size must be positive");
  }
  const Image & src = in.image;
  SplitMix64 rng(seed);
  const auto & anchor =
    in.annotations[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(in.annotations.size()) - 1))];

  // Along each axis the window spans min(size, image) pixels.
  const int win_w = std::min(size.width, src.width);
  const int win_h = std::min(size.height, src.height);
  const BBox & b = anchor.bbox;
  const auto overlap = [](double lo, double len, int start, int extent) {
    return std::max(0.0, std::min(lo + len, double(start + extent)) - std::max(lo, double(start)));
  };
  std::vector<double> ox(static_cast<std::size_t>(src.width - win_w + 1));
  std::vector<double> oy(static_cast<std::size_t>(src.height - win_h + 1));
  for (std::size_t x = 0; x < ox.size(); ++x) ox[x] = overlap(b.x, b.w, int(x), win_w);
  for (std::size_t y = 0; y < oy.size(); ++y) oy[y] = overlap(b.y, b.h, int(y), win_h);

  const double needed = kCropAnchorCoverage * b.w * b.h;
  // Candidate windows, counted per column so one can be drawn uniformly
  // without listing them all.
  std::vector<std::uint64_t> per_x(ox.size(), 0);
  std::uint64_t total = 0;
  for (std::size_t x = 0; x < ox.size(); ++x) {
    for (std::size_t y = 0; y < oy.size(); ++y) {
      per_x[x] += ox[x] * oy[y] >= needed ? 1 : 0;
    }
    total += per_x[x];
  }

  int wx = 0;
  int wy = 0;
  if (total > 0) {
    auto pick = static_cast<std::uint64_t>(rng.uniform_int(0, static_cast<std::int64_t>(total) - 1));
    std::size_t x = 0;
    while (pick >= per_x[x]) {
      pick -= per_x[x++];
    }
    std::size_t y = 0;
    for (;; ++y) {
      if (ox[x] * oy[y] >= needed) {
        if (pick == 0) break;
        --pick;
      }
    }
    wx = static_cast<int>(x);
    wy = static_cast<int>(y);
  } else {
    // The anchor is too large for any window to keep half of it: centre on it.
    wx = std::clamp(static_cast<int>(std::floor(b.x + b.w / 2 - win_w / 2.0)), 0, src.width - win_w);
    wy = std::clamp(static_cast<int>(std::floor(b.y + b.h / 2 - win_h / 2.0)), 0, src.height - win_h);
  }

  const int out_w = std::max(size.width, 0);
  const int out_h = std::max(size.height, 0);
  AnnotatedImage out;
  out.image = Image(out_w, out_h, src.channels);
  for (int y = 0; y < win_h; ++y) {
    for (int x = 0; x < win_w; ++x) {
      for (int c = 0; c < src.channels; ++c) {
        out.image.at(x, y, c) = src.at(wx + x, wy + y, c);
      }
    }
  }
  const PixelRect window{wx, wy, wx + out_w, wy + out_h};
  for (const auto & a : in.annotations) {
    const BinaryMask full = rasterize(a.segmentation, src.width, src.height);
    const BinaryMask clipped = crop(full, window);
    if (const auto bounds = tight_bounds(clipped)) {
      out.annotations.push_back(with_mask(a, clipped, *bounds));
    }
  }
  return out;
}

}  // namespace litterkit
