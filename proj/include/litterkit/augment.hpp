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
#include <vector>

#include "litterkit/dataset.hpp"
#include "litterkit/image.hpp"

namespace litterkit
{

/// An image together with the annotations that live on it. Geometric
/// augmentations return RLE segmentations over the new frame.
struct AnnotatedImage
{
  Image image;
  std::vector<Annotation> annotations;
};

/// Separable Gaussian with reflect-101 borders (dcb|abcd|cba), kernel radius
/// ceil(3 sigma), computed in float and rounded half-up. sigma = 0 is the
/// identity.
Image gaussian_blur(const Image & img, double sigma);

/// Normalised 1-D Gaussian taps for `sigma` (2 * ceil(3 sigma) + 1 values).
std::vector<double> gaussian_kernel(double sigma);

/// Adds i.i.d. N(0, stddev^2) noise to every channel sample, clamps to
/// [0, 255] and rounds half-up.
Image awgn(const Image & img, double stddev, std::uint64_t seed);

/// out = clamp(gain * in + bias), rounded half-up. gain must be positive.
Image exposure_contrast(const Image & img, double gain, double bias);

/// Rotates about the image centre onto an expanded canvas (image bilinear,
/// masks nearest-neighbour). Annotations whose mask vanishes are dropped.
AnnotatedImage rotate_with_annotations(const AnnotatedImage & in, double degrees);

struct CropSize
{
  int width = 0;
  int height = 0;
};

/// Minimum fraction of the anchor's bbox area a crop window must keep.
inline constexpr double kCropAnchorCoverage = 0.5;

/// Picks an anchor annotation, then a window of `size` uniformly among the
/// integer positions keeping >= 50% of the anchor's bbox. Annotations are
/// clipped to the window and empties dropped. Along any axis where the image
/// is smaller than the window, the whole extent is kept and zero-padded.
AnnotatedImage crop_around_bbox(const AnnotatedImage & in, CropSize size, std::uint64_t seed);

}  // namespace litterkit
