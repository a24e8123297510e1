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
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "litterkit/dataset.hpp"
#include "litterkit/image.hpp"
#include "litterkit/taxonomy.hpp"
#include "litterkit/transplant.hpp"

namespace litterkit
{

struct TransplantRequest
{
  std::int64_t annotation_id = 0;
  std::int64_t target_image_id = 0;
  Placement placement;
};

/// {annotation_id, target_image_id, placement: {x, y, scale, rotation, soft,
/// radius}}; placement fields other than x and y are optional.
TransplantRequest parse_transplant_request(const nlohmann::json & j);
nlohmann::json to_json(const TransplantRequest & r);

struct ServiceOptions
{
  /// Directory that receives composited images on export. Empty: export only
  /// returns the annotation file.
  std::filesystem::path export_dir;
  /// Optional task mapping; the annotation filter also matches its classes.
  std::optional<TaxonomyMapping> mapping;
};

/// The working set behind the interactive transplanter. Commits replace the
/// target image in memory and append one annotation; nothing reaches disk
/// until export.
class TransplantService
{
public:
  /// Throws InvalidArgument when `dataset` does not validate.
  TransplantService(Dataset dataset, ImageLoader loader, ServiceOptions options = {});

  nlohmann::json images() const;
  /// PNG of the image as it currently stands in the working set.
  std::vector<std::uint8_t> image_file(std::int64_t image_id) const;
  /// Annotations whose category name, supercategory or mapped class equals
  /// `category`; all annotations when no filter is given.
  nlohmann::json annotations(const std::optional<std::string> & category) const;
  /// RGBA PNG of the object's mask bounds, alpha 255 inside the mask.
  std::vector<std::uint8_t> crop(std::int64_t annotation_id) const;

  /// PNG of the composite. Never touches the working set.
  std::vector<std::uint8_t> preview(const TransplantRequest & request) const;
  /// Applies the transplant and returns the new annotation id.
  std::int64_t commit(const TransplantRequest & request);
  /// Serialized annotation file of the working set. Composited images are
  /// written to export_dir as "<stem>_transplant.png" and their records
  /// renamed accordingly.
  std::string export_annotations();

  Dataset working_set() const;

private:
  Image current_image(std::int64_t image_id) const;
  TransplantResult render(const TransplantRequest & request) const;

  mutable std::shared_mutex mutex_;
  Dataset dataset_;
  ImageLoader loader_;
  ServiceOptions options_;
  std::map<std::int64_t, Image> edited_;
};

/// HTTP/1.1 front end for a TransplantService.
class TransplantServer
{
public:
  explicit TransplantServer(TransplantService & service);
  ~TransplantServer();
  TransplantServer(const TransplantServer &) = delete;
  TransplantServer & operator=(const TransplantServer &) = delete;

  /// Binds and starts serving on a background thread. Port 0 picks a free
  /// port. Throws Error when the port cannot be bound.
  int start(const std::string & host, int port);
  /// Blocks until stop() is called from another thread.
  void wait();
  void stop();
  int port() const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace litterkit
