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
#include <filesystem>
#include <span>
#include <vector>

namespace litterkit
{

/// Interleaved 8-bit image, row-major. Colour images are RGB (or RGBA).
struct Image
{
  int width = 0;
  int height = 0;
  int channels = 3;
  std::vector<std::uint8_t> data;

  Image() = default;
  Image(int w, int h, int c, std::uint8_t fill = 0);

  std::uint8_t & at(int x, int y, int c)
  {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  std::uint8_t at(int x, int y, int c) const
  {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  bool empty() const { return width == 0 || height == 0; }

  bool operator==(const Image &) const = default;
};

/// Reads PNG or JPEG as 3-channel RGB.
Image read_image(const std::filesystem::path & path);
Image decode_image(std::span<const std::uint8_t> bytes);

/// Lossless PNG with fixed encoder settings, so equal images give equal bytes.
std::vector<std::uint8_t> encode_png(const Image & image);
void write_png(const Image & image, const std::filesystem::path & path);

}  // namespace litterkit
