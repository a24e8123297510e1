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

#include <utility>

#include "litterkit/image.hpp"
#include "litterkit/mask_ops.hpp"

namespace litterkit
{

/// Rotation by `degrees` (counter-clockwise as displayed) and uniform
/// `scale` about the centre of a src_width x src_height rectangle. The output
/// canvas is the bounding box of the transformed rectangle. Coordinates are
/// continuous with pixel centres at i + 0.5.
class CenteredTransform
{
public:
  CenteredTransform(int src_width, int src_height, double scale, double degrees);

  int out_width() const { return out_width_; }
  int out_height() const { return out_height_; }

  /// Source point that lands on the centre of output pixel (u, v).
  std::pair<double, double> source_of(int u, int v) const;

private:
  int src_width_;
  int src_height_;
  int out_width_;
  int out_height_;
  double scale_;
  double cos_;
  double sin_;
};

/// Bilinear sample at continuous (x, y); neighbours outside the image are
/// clamped to the nearest edge pixel.
double sample_bilinear(const Image & image, double x, double y, int channel);
/// Bilinear sample of a 0/1 mask; pixels outside the mask count as 0.
double sample_bilinear(const BinaryMask & mask, double x, double y);
/// Value of the pixel containing (x, y), 0 outside.
std::uint8_t sample_nearest(const BinaryMask & mask, double x, double y);

}  // namespace litterkit
