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

#include "litterkit/mask_ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "litterkit/error.hpp"

namespace litterkit
{

std::size_t BinaryMask::count() const
{
  return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

namespace
{

// Fills `poly` (image coordinates) into `mask`, whose pixel (0, 0) sits at
// image pixel `origin`. Only pixels inside both the mask and the image are set.
void fill_polygon(
  const Polygon & poly, BinaryMask & mask, Offset origin, int image_width, int image_height,
  std::vector<double> & crossings)
{
  const std::size_t n = poly.size() / 2;
  if (n < 3) {
    return;
  }
  double ymin = poly[1];
  double ymax = poly[1];
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(poly[2 * i]) || !std::isfinite(poly[2 * i + 1])) {
      throw InvalidArgument("polygon vertex is not finite");
    }
    ymin = std::min(ymin, poly[2 * i + 1]);
    ymax = std::max(ymax, poly[2 * i + 1]);
  }
  const int x_lo = std::max(0, origin.x);
  const int x_hi = std::min(image_width, origin.x + mask.width);
  const int row_begin = std::max({0, origin.y, static_cast<int>(std::floor(ymin - 0.5))});
  const int row_end =
    std::min({image_height, origin.y + mask.height, static_cast<int>(std::ceil(ymax)) + 1});

  for (int y = row_begin; y < row_end; ++y) {
    const double yc = y + 0.5;
    crossings.clear();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      const double xi = poly[2 * i];
      const double yi = poly[2 * i + 1];
      const double xj = poly[2 * j];
      const double yj = poly[2 * j + 1];
      if ((yi > yc) != (yj > yc)) {
        crossings.push_back((xj - xi) * (yc - yi) / (yj - yi) + xi);
      }
    }
    std::sort(crossings.begin(), crossings.end());
    // A centre xc is inside iff an odd number of crossings lie strictly to
    // its right, i.e. xc in [c[2k], c[2k+1]).
    for (std::size_t k = 0; k + 1 < crossings.size(); k += 2) {
      const double lo = crossings[k];
      const double hi = crossings[k + 1];
      int x = std::max(x_lo, static_cast<int>(std::floor(lo - 0.5)) - 1);
      while (x < x_hi && x + 0.5 < lo) {
        ++x;
      }
      for (; x < x_hi && x + 0.5 < hi; ++x) {
        mask.at(x - origin.x, y - origin.y) = 1;
      }
    }
  }
}

void fill_polygons(
  const PolygonList & polygons, BinaryMask & mask, Offset origin, int image_width, int image_height)
{
  std::vector<double> crossings;
  // Each polygon is filled even-odd on its own layer, then unioned.
  if (polygons.size() == 1) {
    fill_polygon(polygons.front(), mask, origin, image_width, image_height, crossings);
    return;
  }
  BinaryMask layer(mask.width, mask.height);
  for (const auto & poly : polygons) {
    std::fill(layer.bits.begin(), layer.bits.end(), 0);
    fill_polygon(poly, layer, origin, image_width, image_height, crossings);
    for (std::size_t i = 0; i < mask.bits.size(); ++i) {
      mask.bits[i] |= layer.bits[i];
    }
  }
}

}  // namespace

BinaryMask rasterize_polygons(const PolygonList & polygons, int width, int height)
{
  if (width < 0 || height < 0) {
    throw InvalidArgument("mask dimensions must be non-negative");
  }
  BinaryMask mask(width, height);
  fill_polygons(polygons, mask, Offset{0, 0}, width, height);
  return mask;
}

BinaryMask decode_rle(const Rle & rle)
{
  if (rle.width < 0 || rle.height < 0) {
    throw InvalidArgument("RLE size must be non-negative");
  }
  BinaryMask mask(rle.width, rle.height);
  const std::uint64_t total = static_cast<std::uint64_t>(rle.width) * rle.height;
  const std::uint64_t sum = std::accumulate(rle.counts.begin(), rle.counts.end(), std::uint64_t{0});
  if (sum != total) {
    throw InvalidArgument(
      "RLE run sum " + std::to_string(sum) + " does not match " + std::to_string(rle.height) + "x" +
      std::to_string(rle.width));
  }
  std::uint64_t idx = 0;
  bool value = false;
  for (const std::uint32_t run : rle.counts) {
    if (value) {
      for (std::uint64_t k = idx; k < idx + run; ++k) {
        const int x = static_cast<int>(k / rle.height);
        const int y = static_cast<int>(k % rle.height);
        mask.at(x, y) = 1;
      }
    }
    idx += run;
    value = !value;
  }
  return mask;
}

Rle encode_rle(const BinaryMask & mask)
{
  Rle rle;
  rle.width = mask.width;
  rle.height = mask.height;
  std::uint8_t current = 0;
  std::uint32_t run = 0;
  for (int x = 0; x < mask.width; ++x) {
    for (int y = 0; y < mask.height; ++y) {
      const std::uint8_t v = mask.at(x, y) ? 1 : 0;
      if (v != current) {
        rle.counts.push_back(run);
        run = 0;
        current = v;
      }
      ++run;
    }
  }
  rle.counts.push_back(run);
  return rle;
}

BinaryMask rasterize(const Segmentation & seg, int width, int height)
{
  if (const auto * polys = std::get_if<PolygonList>(&seg)) {
    return rasterize_polygons(*polys, width, height);
  }
  const auto & rle = std::get<Rle>(seg);
  if (rle.width != width || rle.height != height) {
    throw InvalidArgument(
      "RLE size [" + std::to_string(rle.height) + "," + std::to_string(rle.width) +
      "] does not match image " + std::to_string(height) + "x" + std::to_string(width));
  }
  return decode_rle(rle);
}

std::optional<PixelRect> tight_bounds(const BinaryMask & mask)
{
  PixelRect r{mask.width, mask.height, -1, -1};
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      if (mask.at(x, y)) {
        r.x0 = std::min(r.x0, x);
        r.y0 = std::min(r.y0, y);
        r.x1 = std::max(r.x1, x + 1);
        r.y1 = std::max(r.y1, y + 1);
      }
    }
  }
  if (r.x1 < 0) {
    return std::nullopt;
  }
  return r;
}

BinaryMask crop(const BinaryMask & mask, const PixelRect & rect)
{
  BinaryMask out(rect.width(), rect.height());
  for (int y = 0; y < out.height; ++y) {
    for (int x = 0; x < out.width; ++x) {
      const int sx = rect.x0 + x;
      const int sy = rect.y0 + y;
      if (sx >= 0 && sy >= 0 && sx < mask.width && sy < mask.height) {
        out.at(x, y) = mask.at(sx, sy);
      }
    }
  }
  return out;
}

double mask_iou(const BinaryMask & a, const BinaryMask & b)
{
  if (a.width != b.width || a.height != b.height) {
    throw InvalidArgument("mask_iou: dimension mismatch");
  }
  std::size_t inter = 0;
  std::size_t uni = 0;
  for (std::size_t i = 0; i < a.bits.size(); ++i) {
    inter += a.bits[i] & b.bits[i];
    uni += a.bits[i] | b.bits[i];
  }
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

LocalMask make_local(const BinaryMask & mask)
{
  LocalMask out;
  out.frame_width = mask.width;
  out.frame_height = mask.height;
  if (const auto bounds = tight_bounds(mask)) {
    out.rect = *bounds;
    out.mask = crop(mask, *bounds);
    out.area = out.mask.count();
  }
  return out;
}

LocalMask rasterize_local(const Segmentation & seg, int width, int height)
{
  const auto * polys = std::get_if<PolygonList>(&seg);
  if (!polys) {
    return make_local(rasterize(seg, width, height));
  }
  double xmin = std::numeric_limits<double>::infinity();
  double ymin = xmin;
  double xmax = -xmin;
  double ymax = -xmin;
  for (const auto & poly : *polys) {
    if (poly.size() < 6) {
      continue;
    }
    for (std::size_t i = 0; i + 1 < poly.size(); i += 2) {
      if (!std::isfinite(poly[i]) || !std::isfinite(poly[i + 1])) {
        throw InvalidArgument("polygon vertex is not finite");
      }
      xmin = std::min(xmin, poly[i]);
      xmax = std::max(xmax, poly[i]);
      ymin = std::min(ymin, poly[i + 1]);
      ymax = std::max(ymax, poly[i + 1]);
    }
  }
  LocalMask out;
  out.frame_width = width;
  out.frame_height = height;
  if (xmin > xmax) {
    return out;
  }
  const PixelRect window{
    std::max(0, static_cast<int>(std::floor(std::max(xmin, -1.0))) - 1),
    std::max(0, static_cast<int>(std::floor(std::max(ymin, -1.0))) - 1),
    std::min(width, static_cast<int>(std::ceil(std::min(xmax, double(width)))) + 1),
    std::min(height, static_cast<int>(std::ceil(std::min(ymax, double(height)))) + 1)};
  if (window.width() <= 0 || window.height() <= 0) {
    return out;
  }
  BinaryMask local(window.width(), window.height());
  fill_polygons(*polys, local, Offset{window.x0, window.y0}, width, height);
  if (const auto bounds = tight_bounds(local)) {
    out.rect = PixelRect{
      window.x0 + bounds->x0, window.y0 + bounds->y0, window.x0 + bounds->x1,
      window.y0 + bounds->y1};
    out.mask = crop(local, *bounds);
    out.area = out.mask.count();
  }
  return out;
}

double local_iou(const LocalMask & a, const LocalMask & b)
{
  if (a.frame_width != b.frame_width || a.frame_height != b.frame_height) {
    throw InvalidArgument("local_iou: frame mismatch");
  }
  const int x0 = std::max(a.rect.x0, b.rect.x0);
  const int y0 = std::max(a.rect.y0, b.rect.y0);
  const int x1 = std::min(a.rect.x1, b.rect.x1);
  const int y1 = std::min(a.rect.y1, b.rect.y1);
  std::size_t inter = 0;
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) {
      inter += a.mask.at(x - a.rect.x0, y - a.rect.y0) & b.mask.at(x - b.rect.x0, y - b.rect.y0);
    }
  }
  const std::size_t uni = a.area + b.area - inter;
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();

// Lower envelope of parabolas y = f[v] + (q - v)^2 over one row or column.
// Sites with infinite f take no part; `out` is contiguous.
void squared_edt_1d(
  const double * f, std::size_t stride, int n, double * out, std::vector<int> & v, std::vector<double> & z)
{
  v.assign(static_cast<std::size_t>(n), 0);
  z.assign(static_cast<std::size_t>(n) + 1, 0.0);
  auto fv = [&](int i) { return f[static_cast<std::size_t>(i) * stride]; };
  auto meet = [&](int q, int p) { return ((fv(q) + double(q) * q) - (fv(p) + double(p) * p)) / (2.0 * q - 2.0 * p); };
  int k = -1;
  for (int q = 0; q < n; ++q) {
    if (fv(q) == kInf) {
      continue;
    }
    if (k < 0) {
      k = 0;
      v[0] = q;
      z[0] = -kInf;
      z[1] = kInf;
      continue;
    }
    double s = meet(q, v[k]);
    while (s <= z[k]) {
      --k;
      s = meet(q, v[k]);
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kInf;
  }
  if (k < 0) {
    std::fill(out, out + n, kInf);
    return;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) {
      ++k;
    }
    const double d = q - v[k];
    out[q] = d * d + fv(v[k]);
  }
}

}  // namespace

DistanceField distance_transform(const BinaryMask & mask)
{
  const int w = mask.width;
  const int h = mask.height;
  DistanceField field{w, h, std::vector<double>(static_cast<std::size_t>(w) * h, 0.0)};
  if (w == 0 || h == 0) {
    return field;
  }

  std::vector<double> grid(field.values.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid[i] = mask.bits[i] ? kInf : 0.0;
  }

  std::vector<double> column_out(static_cast<std::size_t>(h));
  std::vector<double> row_out(static_cast<std::size_t>(w));
  std::vector<int> v;
  std::vector<double> z;

  for (int x = 0; x < w; ++x) {
    squared_edt_1d(grid.data() + x, static_cast<std::size_t>(w), h, column_out.data(), v, z);
    for (int y = 0; y < h; ++y) {
      grid[static_cast<std::size_t>(y) * w + x] = column_out[static_cast<std::size_t>(y)];
    }
  }
  const double cap = static_cast<double>(w) + static_cast<double>(h);
  for (int y = 0; y < h; ++y) {
    double * row = grid.data() + static_cast<std::size_t>(y) * w;
    squared_edt_1d(row, 1, w, row_out.data(), v, z);
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      field.values[i] = mask.bits[i] ? std::min(std::sqrt(row_out[static_cast<std::size_t>(x)]), cap) : 0.0;
    }
  }
  return field;
}

SoftMask soft_mask(const BinaryMask & mask, double radius)
{
  if (!(radius > 0.0)) {
    throw InvalidArgument("soft_mask: radius must be positive");
  }
  const DistanceField dist = distance_transform(mask);
  SoftMask out{mask.width, mask.height, std::vector<double>(dist.values.size())};
  for (std::size_t i = 0; i < dist.values.size(); ++i) {
    out.alpha[i] = std::min(dist.values[i] / radius, 1.0);
  }
  return out;
}

SoftMask hard_mask(const BinaryMask & mask)
{
  SoftMask out{mask.width, mask.height, std::vector<double>(mask.bits.size())};
  for (std::size_t i = 0; i < mask.bits.size(); ++i) {
    out.alpha[i] = mask.bits[i] ? 1.0 : 0.0;
  }
  return out;
}

Image blend(const Image & src, const SoftMask & alpha, const Image & dst, Offset offset)
{
  if (src.width != alpha.width || src.height != alpha.height) {
    throw InvalidArgument("blend: source and alpha dimensions differ");
  }
  if (src.channels != dst.channels) {
    throw InvalidArgument("blend: source and destination channel counts differ");
  }
  Image out = dst;
  const int x_begin = std::max(0, -offset.x);
  const int y_begin = std::max(0, -offset.y);
  const int x_end = std::min(src.width, dst.width - offset.x);
  const int y_end = std::min(src.height, dst.height - offset.y);
  for (int y = y_begin; y < y_end; ++y) {
    for (int x = x_begin; x < x_end; ++x) {
      const double a = alpha.at(x, y);
      if (a <= 0.0) {
        continue;
      }
      for (int c = 0; c < src.channels; ++c) {
        const double value = a * src.at(x, y, c) + (1.0 - a) * dst.at(x + offset.x, y + offset.y, c);
        out.at(x + offset.x, y + offset.y, c) =
          static_cast<std::uint8_t>(std::clamp(std::floor(value + 0.5), 0.0, 255.0));
      }
    }
  }
  return out;
}

}  // namespace litterkit
