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
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "litterkit/segmentation.hpp"

namespace litterkit
{

// Fields the toolkit does not interpret are kept in `extra` and written back
// unchanged.

struct ImageRecord
{
  std::int64_t id = 0;
  std::string file_name;
  int width = 0;
  int height = 0;
  nlohmann::json extra = nlohmann::json::object();

  bool operator==(const ImageRecord &) const = default;
};

struct Annotation
{
  std::int64_t id = 0;
  std::int64_t image_id = 0;
  std::int64_t category_id = 0;
  Segmentation segmentation;
  BBox bbox;
  double area = 0;
  nlohmann::json extra = nlohmann::json::object();

  bool operator==(const Annotation &) const = default;
};

struct Category
{
  std::int64_t id = 0;
  std::string name;
  std::string supercategory;
  nlohmann::json extra = nlohmann::json::object();

  bool operator==(const Category &) const = default;
};

struct SceneTag
{
  std::int64_t id = 0;
  std::string name;
  nlohmann::json extra = nlohmann::json::object();

  bool operator==(const SceneTag &) const = default;
};

struct SceneAssignment
{
  std::int64_t image_id = 0;
  std::int64_t scene_tag_id = 0;

  bool operator==(const SceneAssignment &) const = default;
};

/// COCO instance-segmentation container extended with scene tags. Treated as
/// an immutable value once built; transformations return new datasets.
struct Dataset
{
  std::vector<ImageRecord> images;
  std::vector<Annotation> annotations;
  std::vector<Category> categories;
  std::vector<SceneTag> scene_tags;
  std::vector<SceneAssignment> scene_assignments;
  nlohmann::json extra = nlohmann::json::object();

  const ImageRecord * find_image(std::int64_t id) const;
  const Category * find_category(std::int64_t id) const;
  const Annotation * find_annotation(std::int64_t id) const;

  bool operator==(const Dataset &) const = default;
};

/// Id -> position lookup built once for repeated queries.
class DatasetIndex
{
public:
  explicit DatasetIndex(const Dataset & d);

  const ImageRecord * image(std::int64_t id) const;
  const Category * category(std::int64_t id) const;
  /// Annotations belonging to an image, in dataset order.
  const std::vector<const Annotation *> & annotations_of(std::int64_t image_id) const;

private:
  const Dataset * dataset_;
  std::unordered_map<std::int64_t, std::size_t> images_;
  std::unordered_map<std::int64_t, std::size_t> categories_;
  std::unordered_map<std::int64_t, std::vector<const Annotation *>> by_image_;
};

/// Throws ParseError on malformed text and IntegrityError on dangling ids.
Dataset parse_dataset(std::string_view text);
Dataset load_dataset(const std::filesystem::path & path);

/// Deterministic: collections sorted by id, object keys sorted.
std::string serialize_dataset(const Dataset & d);
void save_dataset(const Dataset & d, const std::filesystem::path & path);

nlohmann::json segmentation_to_json(const Segmentation & seg);
Segmentation segmentation_from_json(const nlohmann::json & j);

struct Violation
{
  std::string entity;  // image, annotation, category, scene_tag, scene_assignment
  std::int64_t id = 0;
  std::string rule;
  std::string detail;
};

struct ValidationReport
{
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  std::size_t count(std::string_view rule) const;
};

/// Relative tolerance on |area - rasterized pixel count|.
inline constexpr double kAreaTolerance = 0.05;
/// Per-edge tolerance between the stored bbox and the mask's tight bounds.
inline constexpr double kBBoxTolerance = 1.0;

ValidationReport validate(const Dataset & d);

}  // namespace litterkit
