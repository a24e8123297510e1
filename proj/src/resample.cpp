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

#include "litterkit/resample.hpp"

#include <algorithm>
#include <cmath>

#include "litterkit/error.hpp"

namespace litterkit
{

namespace
{
// Extents like 99.99999999997 from cos/sin round-off must not grow the canvas.
int canvas_extent(double v)
{
  return std::max(1, static_cast<int>(std::ceil(v - 1e-6)));
}
}  // namespace

CenteredTransform::CenteredTransform(int src_width, int src_height, double scale, double degrees)
: src_width_(src_width), src_height_(src_height), scale_(scale)
{
  if (!(scale > 0) || !std::isfinite(scale)) {
    throw InvalidArgument("scale must be positive");
  }
  if (!std::isfinite(degrees)) {
    throw InvalidArgument("rotation must be finite");
  }
  const double rad = degrees * M_PI / 180.0;
  cos_ = std::cos(rad);
  sin_ = std::sin(rad);
  out_width_ = canvas_extent(scale * (src_width * std::fabs(cos_) + src_height * std::fabs(sin_)));
  out_height_ = canvas_extent(scale * (src_width * std::fabs(sin_) + src_height * std::fabs(cos_)));
}

std::pair<double, double> CenteredTransform::source_of(int u, int v) const
{
  const double dx = (u + 0.5) - out_width_ / 2.0;
  const double dy = (v + 0.5) - out_height_ / 2.0;
  const double sx = (cos_ * dx - sin_ * dy) / scale_;
  const double sy = (sin_ * dx + cos_ * dy) / scale_;
  return {sx + src_width_ / 2.0, sy + src_height_ / 2.0};
}

double sample_bilinear(const Image & image, double x, double y, int channel)
{
  const double ix = x - 0.5;
  const double iy = y - 0.5;
  const double fx0 = std::floor(ix);
  const double fy0 = std::floor(iy);
  const double fx = ix - fx0;
  const double fy = iy - fy0;
  const auto clamp_x = [&](double v) { return static_cast<int>(std::clamp(v, 0.0, double(image.width - 1))); };
  const auto clamp_y = [&](double v) { return static_cast<int>(std::clamp(v, 0.0, double(image.height - 1))); };
  const int x0 = clamp_x(fx0);
  const int x1 = clamp_x(fx0 + 1);
  const int y0 = clamp_y(fy0);
  const int y1 = clamp_y(fy0 + 1);
  return (1 - fx) * (1 - fy) * image.at(x0, y0, channel) + fx * (1 - fy) * image.at(x1, y0, channel) +
         (1 - fx) * fy * image.at(x0, y1, channel) + fx * fy * image.at(x1, y1, channel);
}

double sample_bilinear(const BinaryMask & mask, double x, double y)
{
  const double ix = x - 0.5;
  const double iy = y - 0.5;
  const double fx0 = std::floor(ix);
  const double fy0 = std::floor(iy);
  const double fx = ix - fx0;
  const double fy = iy - fy0;
  const auto value = [&](double px, double py) -> double {
    if (px < 0 || py < 0 || px >= mask.width || py >= mask.height) {
      return 0.0;
    }
    return mask.at(static_cast<int>(px), static_cast<int>(py));
  };
  return (1 - fx) * (1 - fy) * value(fx0, fy0) + fx * (1 - fy) * value(fx0 + 1, fy0) +
         (1 - fx) * fy * value(fx0, fy0 + 1) + fx * fy * value(fx0 + 1, fy0 + 1);
}

std::uint8_t sample_nearest(const BinaryMask & mask, double x, double y)
{
  const double fx = std::floor(x);
  const double fy = std::floor(y);
  if (fx < 0 || fy < 0 || fx >= mask.width || fy >= mask.height) {
    return 0;
  }
  return mask.at(static_cast<int>(fx), static_cast<int>(fy));
}

}  // namespace litterkit
