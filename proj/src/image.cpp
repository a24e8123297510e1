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

#include "litterkit/image.hpp"

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include <fstream>

#include "litterkit/error.hpp"

namespace litterkit
{

Image::Image(int w, int h, int c, std::uint8_t fill)
: width(w), height(h), channels(c), data(static_cast<std::size_t>(w) * h * c, fill)
{
  if (w < 0 || h < 0 || c < 1 || c > 4) {
    throw InvalidArgument("image dimensions must be non-negative with 1-4 channels");
  }
}

namespace
{

Image from_bgr(const cv::Mat & mat)
{
  Image out(mat.cols, mat.rows, mat.channels());
  for (int y = 0; y < mat.rows; ++y) {
    const std::uint8_t * row = mat.ptr<std::uint8_t>(y);
    for (int x = 0; x < mat.cols; ++x) {
      const std::uint8_t * px = row + static_cast<std::size_t>(x) * mat.channels();
      if (mat.channels() >= 3) {
        out.at(x, y, 0) = px[2];
        out.at(x, y, 1) = px[1];
        out.at(x, y, 2) = px[0];
        if (mat.channels() == 4) {
          out.at(x, y, 3) = px[3];
        }
      } else {
        for (int c = 0; c < mat.channels(); ++c) {
          out.at(x, y, c) = px[c];
        }
      }
    }
  }
  return out;
}

cv::Mat to_bgr(const Image & image)
{
  cv::Mat mat(image.height, image.width, CV_8UC(image.channels));
  for (int y = 0; y < image.height; ++y) {
    std::uint8_t * row = mat.ptr<std::uint8_t>(y);
    for (int x = 0; x < image.width; ++x) {
      std::uint8_t * px = row + static_cast<std::size_t>(x) * image.channels;
      if (image.channels >= 3) {
        px[0] = image.at(x, y, 2);
        px[1] = image.at(x, y, 1);
        px[2] = image.at(x, y, 0);
        if (image.channels == 4) {
          px[3] = image.at(x, y, 3);
        }
      } else {
        for (int c = 0; c < image.channels; ++c) {
          px[c] = image.at(x, y, c);
        }
      }
    }
  }
  return mat;
}

}  // namespace

Image read_image(const std::filesystem::path & path)
{
  cv::Mat mat = cv::imread(path.string(), cv::IMREAD_COLOR);
  if (mat.empty()) {
    throw Error("cannot read image " + path.string());
  }
  return from_bgr(mat);
}

Image decode_image(std::span<const std::uint8_t> bytes)
{
  const cv::Mat buf(1, static_cast<int>(bytes.size()), CV_8UC1, const_cast<std::uint8_t *>(bytes.data()));
  cv::Mat mat = cv::imdecode(buf, cv::IMREAD_UNCHANGED);
  if (mat.empty() || mat.depth() != CV_8U) {
    throw Error("cannot decode image payload");
  }
  return from_bgr(mat);
}

std::vector<std::uint8_t> encode_png(const Image & image)
{
  std::vector<std::uint8_t> out;
  const std::vector<int> params{cv::IMWRITE_PNG_COMPRESSION, 6};
  if (!cv::imencode(".png", to_bgr(image), out, params)) {
    throw Error("PNG encoding failed");
  }
  return out;
}

void write_png(const Image & image, const std::filesystem::path & path)
{
  const auto bytes = encode_png(image);
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    throw Error("cannot write " + path.string());
  }
  f.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace litterkit
