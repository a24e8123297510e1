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
#include <variant>
#include <vector>

namespace litterkit
{

/// Uncompressed run-length encoding in column-major order. Runs alternate
/// background/foreground starting with background (the first run may be 0).
struct Rle
{
  int height = 0;
  int width = 0;
  std::vector<std::uint32_t> counts;

  bool operator==(const Rle &) const = default;
};

/// Flat vertex list x1,y1,x2,y2,... in pixel coordinates.
using Polygon = std::vector<double>;
using PolygonList = std::vector<Polygon>;
using Segmentation = std::variant<PolygonList, Rle>;

struct BBox
{
  double x = 0;
  double y = 0;
  double w = 0;
  double h = 0;

  double area() const { return w * h; }
  bool operator==(const BBox &) const = default;
};

}  // namespace litterkit
