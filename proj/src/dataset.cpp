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

#include "litterkit/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "litterkit/error.hpp"
#include "litterkit/mask_ops.hpp"
#include "litterkit/parallel.hpp"

namespace litterkit
{

using nlohmann::json;

namespace
{

template <typename T>
const T * find_by_id(const std::vector<T> & items, std::int64_t id)
{
  const auto it = std::find_if(items.begin(), items.end(), [id](const T & t) { return t.id == id; });
  return it == items.end() ? nullptr : &*it;
}

json extras_of(const json & obj, std::initializer_list<const char *> known)
{
  json extra = json::object();
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::none_of(known.begin(), known.end(), [&](const char * k) { return it.key() == k; })) {
      extra[it.key()] = it.value();
    }
  }
  return extra;
}

// Integral values are written as JSON integers so that COCO files with
// integer coordinates round-trip textually.
json number(double v)
{
  if (std::isfinite(v) && v == std::floor(v) && std::fabs(v) < 9.0e15) {
    return static_cast<std::int64_t>(v);
  }
  return v;
}

const json & require(const json & obj, const char * key, const std::string & where)
{
  const auto it = obj.find(key);
  if (it == obj.end()) {
    throw ParseError(where + ": missing field '" + key + "'", 0);
  }
  return *it;
}

const json & array_field(const json & root, const char * key)
{
  static const json empty = json::array();
  const auto it = root.find(key);
  if (it == root.end()) {
    return empty;
  }
  if (!it->is_array()) {
    throw ParseError(std::string("'") + key + "' must be an array", 0);
  }
  return *it;
}

}  // namespace

const ImageRecord * Dataset::find_image(std::int64_t id) const { return find_by_id(images, id); }
const Category * Dataset::find_category(std::int64_t id) const { return find_by_id(categories, id); }
const Annotation * Dataset::find_annotation(std::int64_t id) const { return find_by_id(annotations, id); }

DatasetIndex::DatasetIndex(const Dataset & d) : dataset_(&d)
{
  for (std::size_t i = 0; i < d.images.size(); ++i) {
    images_.emplace(d.images[i].id, i);
  }
  for (std::size_t i = 0; i < d.categories.size(); ++i) {
    categories_.emplace(d.categories[i].id, i);
  }
  for (const auto & a : d.annotations) {
    by_image_[a.image_id].push_back(&a);
  }
}

const ImageRecord * DatasetIndex::image(std::int64_t id) const
{
  const auto it = images_.find(id);
  return it == images_.end() ? nullptr : &dataset_->images[it->second];
}

const Category * DatasetIndex::category(std::int64_t id) const
{
  const auto it = categories_.find(id);
  return it == categories_.end() ? nullptr : &dataset_->categories[it->second];
}

const std::vector<const Annotation *> & DatasetIndex::annotations_of(std::int64_t image_id) const
{
  static const std::vector<const Annotation *> none;
  const auto it = by_image_.find(image_id);
  return it == by_image_.end() ? none : it->second;
}

json segmentation_to_json(const Segmentation & seg)
{
  if (const auto * rle = std::get_if<Rle>(&seg)) {
    return json{{"size", {rle->height, rle->width}}, {"counts", rle->counts}};
  }
  json polys = json::array();
  for (const auto & poly : std::get<PolygonList>(seg)) {
    json p = json::array();
    for (const double v : poly) {
      p.push_back(number(v));
    }
    polys.push_back(std::move(p));
  }
  return polys;
}

Segmentation segmentation_from_json(const json & j)
{
  if (j.is_array()) {
    PolygonList polys;
    for (const auto & p : j) {
      if (!p.is_array()) {
        throw ParseError("polygon must be an array of coordinates", 0);
      }
      polys.push_back(p.get<Polygon>());
    }
    return polys;
  }
  if (j.is_object()) {
    const auto & size = require(j, "size", "RLE");
    const auto & counts = require(j, "counts", "RLE");
    if (counts.is_string()) {
      throw ParseError("compressed RLE strings are not supported; use a counts array", 0);
    }
    if (!size.is_array() || size.size() != 2) {
      throw ParseError("RLE size must be [height, width]", 0);
    }
    Rle rle;
    rle.height = size[0].get<int>();
    rle.width = size[1].get<int>();
    rle.counts = counts.get<std::vector<std::uint32_t>>();
    return rle;
  }
  throw ParseError("segmentation must be a polygon list or an RLE object", 0);
}

Dataset parse_dataset(std::string_view text)
{
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error & e) {
    throw ParseError(std::string("malformed annotation file: ") + e.what(), e.byte);
  }
  if (!root.is_object()) {
    throw ParseError("annotation file must contain an object", 0);
  }

  Dataset d;
  try {
    d.extra = extras_of(root, {"images", "annotations", "categories", "scene_tags", "scene_assignments"});
    for (const auto & j : array_field(root, "images")) {
      ImageRecord r;
      r.id = require(j, "id", "image").get<std::int64_t>();
      const std::string where = "image " + std::to_string(r.id);
      r.file_name = require(j, "file_name", where).get<std::string>();
      r.width = require(j, "width", where).get<int>();
      r.height = require(j, "height", where).get<int>();
      r.extra = extras_of(j, {"id", "file_name", "width", "height"});
      d.images.push_back(std::move(r));
    }
    for (const auto & j : array_field(root, "categories")) {
      Category c;
      c.id = require(j, "id", "category").get<std::int64_t>();
      const std::string where = "category " + std::to_string(c.id);
      c.name = require(j, "name", where).get<std::string>();
      c.supercategory = j.value("supercategory", std::string{});
      c.extra = extras_of(j, {"id", "name", "supercategory"});
      d.categories.push_back(std::move(c));
    }
    for (const auto & j : array_field(root, "annotations")) {
      Annotation a;
      a.id = require(j, "id", "annotation").get<std::int64_t>();
      const std::string where = "annotation " + std::to_string(a.id);
      a.image_id = require(j, "image_id", where).get<std::int64_t>();
      a.category_id = require(j, "category_id", where).get<std::int64_t>();
      a.segmentation = segmentation_from_json(require(j, "segmentation", where));
      const auto box = require(j, "bbox", where).get<std::vector<double>>();
      if (box.size() != 4) {
        throw ParseError(where + ": bbox must have 4 numbers", 0);
      }
      a.bbox = BBox{box[0], box[1], box[2], box[3]};
      a.area = require(j, "area", where).get<double>();
      a.extra = extras_of(j, {"id", "image_id", "category_id", "segmentation", "bbox", "area"});
      d.annotations.push_back(std::move(a));
    }
    for (const auto & j : array_field(root, "scene_tags")) {
      SceneTag t;
      t.id = require(j, "id", "scene tag").get<std::int64_t>();
      t.name = require(j, "name", "scene tag " + std::to_string(t.id)).get<std::string>();
      t.extra = extras_of(j, {"id", "name"});
      d.scene_tags.push_back(std::move(t));
    }
    for (const auto & j : array_field(root, "scene_assignments")) {
      SceneAssignment s;
      s.image_id = require(j, "image_id", "scene assignment").get<std::int64_t>();
      s.scene_tag_id = require(j, "scene_tag_id", "scene assignment").get<std::int64_t>();
      d.scene_assignments.push_back(s);
    }
  } catch (const json::exception & e) {
    throw ParseError(std::string("schema error: ") + e.what(), 0);
  }

  // Referential integrity.
  std::unordered_set<std::int64_t> image_ids;
  std::unordered_set<std::int64_t> category_ids;
  std::unordered_set<std::int64_t> tag_ids;
  for (const auto & r : d.images) image_ids.insert(r.id);
  for (const auto & c : d.categories) category_ids.insert(c.id);
  for (const auto & t : d.scene_tags) tag_ids.insert(t.id);
  for (const auto & a : d.annotations) {
    if (!image_ids.count(a.image_id)) {
      throw IntegrityError("image", a.image_id, "annotation " + std::to_string(a.id));
    }
    if (!category_ids.count(a.category_id)) {
      throw IntegrityError("category", a.category_id, "annotation " + std::to_string(a.id));
    }
  }
  for (const auto & s : d.scene_assignments) {
    if (!image_ids.count(s.image_id)) {
      throw IntegrityError("image", s.image_id, "scene assignment");
    }
    if (!tag_ids.count(s.scene_tag_id)) {
      throw IntegrityError("scene tag", s.scene_tag_id, "scene assignment");
    }
  }
  return d;
}

Dataset load_dataset(const std::filesystem::path & path)
{
  std::ifstream f(path, std::ios::binary);
  if (!f) {
    throw Error("cannot open " + path.string());
  }
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_dataset(ss.str());
}

namespace
{

template <typename T>
std::vector<const T *> sorted_by_id(const std::vector<T> & items)
{
  std::vector<const T *> out;
  out.reserve(items.size());
  for (const auto & item : items) {
    out.push_back(&item);
  }
  std::stable_sort(out.begin(), out.end(), [](const T * a, const T * b) { return a->id < b->id; });
  return out;
}

}  // namespace

std::string serialize_dataset(const Dataset & d)
{
  json root = d.extra.is_object() ? d.extra : json::object();

  json images = json::array();
  for (const auto * r : sorted_by_id(d.images)) {
    json j = r->extra.is_object() ? r->extra : json::object();
    j["id"] = r->id;
    j["file_name"] = r->file_name;
    j["width"] = r->width;
    j["height"] = r->height;
    images.push_back(std::move(j));
  }
  json annotations = json::array();
  for (const auto * a : sorted_by_id(d.annotations)) {
    json j = a->extra.is_object() ? a->extra : json::object();
    j["id"] = a->id;
    j["image_id"] = a->image_id;
    j["category_id"] = a->category_id;
    j["segmentation"] = segmentation_to_json(a->segmentation);
    j["bbox"] = json::array({number(a->bbox.x), number(a->bbox.y), number(a->bbox.w), number(a->bbox.h)});
    j["area"] = number(a->area);
    annotations.push_back(std::move(j));
  }
  json categories = json::array();
  for (const auto * c : sorted_by_id(d.categories)) {
    json j = c->extra.is_object() ? c->extra : json::object();
    j["id"] = c->id;
    j["name"] = c->name;
    j["supercategory"] = c->supercategory;
    categories.push_back(std::move(j));
  }
  root["images"] = std::move(images);
  root["annotations"] = std::move(annotations);
  root["categories"] = std::move(categories);

  if (!d.scene_tags.empty()) {
    json tags = json::array();
    for (const auto * t : sorted_by_id(d.scene_tags)) {
      json j = t->extra.is_object() ? t->extra : json::object();
      j["id"] = t->id;
      j["name"] = t->name;
      tags.push_back(std::move(j));
    }
    root["scene_tags"] = std::move(tags);
  }
  if (!d.scene_assignments.empty()) {
    auto assignments = d.scene_assignments;
    std::sort(assignments.begin(), assignments.end(), [](const auto & a, const auto & b) {
      return std::tie(a.image_id, a.scene_tag_id) < std::tie(b.image_id, b.scene_tag_id);
    });
    json arr = json::array();
    for (const auto & s : assignments) {
      arr.push_back(json{{"image_id", s.image_id}, {"scene_tag_id", s.scene_tag_id}});
    }
    root["scene_assignments"] = std::move(arr);
  }
  return root.dump() + "\n";
}

void save_dataset(const Dataset & d, const std::filesystem::path & path)
{
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    throw Error("cannot write " + path.string());
  }
  f << serialize_dataset(d);
}

std::size_t ValidationReport::count(std::string_view rule) const
{
  return static_cast<std::size_t>(
    std::count_if(violations.begin(), violations.end(), [&](const Violation & v) { return v.rule == rule; }));
}

namespace
{

template <typename T>
void check_unique_ids(const std::vector<T> & items, const char * entity, ValidationReport & report)
{
  std::set<std::int64_t> seen;
  for (const auto & item : items) {
    if (!seen.insert(item.id).second) {
      report.violations.push_back({entity, item.id, "duplicate-id", "id appears more than once"});
    }
  }
}

std::string fmt(double v)
{
  std::ostringstream os;
  os << v;
  return os.str();
}

void check_annotation_geometry(const Annotation & a, const ImageRecord & img, ValidationReport & report)
{
  auto add = [&](const char * rule, std::string detail) {
    report.violations.push_back({"annotation", a.id, rule, std::move(detail)});
  };
  const BBox & b = a.bbox;
  constexpr double eps = 1e-9;
  if (!(b.w > 0) || !(b.h > 0)) {
    add("bbox-degenerate", "bbox width/height must be positive (w=" + fmt(b.w) + ", h=" + fmt(b.h) + ")");
  }
  if (b.x < -eps || b.y < -eps || b.x + b.w > img.width + eps || b.y + b.h > img.height + eps) {
    add("bbox-out-of-bounds", "bbox exceeds image " + std::to_string(img.width) + "x" + std::to_string(img.height));
  }
  if (!(a.area > 0)) {
    add("area-nonpositive", "area must be positive");
  }
  if (img.width <= 0 || img.height <= 0) {
    return;
  }

  LocalMask mask;
  try {
    mask = rasterize_local(a.segmentation, img.width, img.height);
  } catch (const Error & e) {
    add("segmentation-invalid", e.what());
    return;
  }
  if (mask.area == 0) {
    add("mask-empty", "segmentation rasterizes to no pixels");
    return;
  }
  const double pixels = static_cast<double>(mask.area);
  if (a.area > 0 && std::fabs(a.area - pixels) > kAreaTolerance * pixels) {
    add("area-mismatch", "area " + fmt(a.area) + " vs " + fmt(pixels) + " rasterized pixels");
  }
  const PixelRect & r = mask.rect;
  if (b.w > 0 && b.h > 0 &&
      (std::fabs(b.x - r.x0) > kBBoxTolerance || std::fabs(b.y - r.y0) > kBBoxTolerance ||
       std::fabs(b.x + b.w - r.x1) > kBBoxTolerance || std::fabs(b.y + b.h - r.y1) > kBBoxTolerance)) {
    add(
      "bbox-mismatch", "bbox [" + fmt(b.x) + "," + fmt(b.y) + "," + fmt(b.w) + "," + fmt(b.h) +
                         "] vs mask bounds [" + std::to_string(r.x0) + "," + std::to_string(r.y0) + "," +
                         std::to_string(r.width()) + "," + std::to_string(r.height()) + "]");
  }
}

}  // namespace

ValidationReport validate(const Dataset & d)
{
  ValidationReport report;
  check_unique_ids(d.images, "image", report);
  check_unique_ids(d.annotations, "annotation", report);
  check_unique_ids(d.categories, "category", report);
  check_unique_ids(d.scene_tags, "scene_tag", report);

  for (const auto & img : d.images) {
    if (img.width <= 0 || img.height <= 0) {
      report.violations.push_back({"image", img.id, "image-size", "width and height must be positive"});
    }
  }
  for (const auto & c : d.categories) {
    if (c.name.empty()) {
      report.violations.push_back({"category", c.id, "category-name-empty", "category name is empty"});
    }
  }
  std::set<std::string> tag_names;
  for (const auto & t : d.scene_tags) {
    if (!tag_names.insert(t.name).second) {
      report.violations.push_back({"scene_tag", t.id, "scene-tag-name-duplicate", "name '" + t.name + "' reused"});
    }
  }

  const DatasetIndex index(d);
  for (const auto & s : d.scene_assignments) {
    if (!index.image(s.image_id)) {
      report.violations.push_back(
        {"scene_assignment", s.image_id, "dangling-image", "unknown image id " + std::to_string(s.image_id)});
    }
    if (std::none_of(d.scene_tags.begin(), d.scene_tags.end(), [&](const SceneTag & t) { return t.id == s.scene_tag_id; })) {
      report.violations.push_back(
        {"scene_assignment", s.image_id, "dangling-scene-tag", "unknown scene tag id " + std::to_string(s.scene_tag_id)});
    }
  }

  // Geometry checks rasterize every annotation; collect per annotation and
  // append in dataset order.
  std::vector<ValidationReport> per_annotation(d.annotations.size());
  parallel_for(d.annotations.size(), [&](std::size_t i) {
    const Annotation & a = d.annotations[i];
    auto & local = per_annotation[i];
    const ImageRecord * img = index.image(a.image_id);
    if (!img) {
      local.violations.push_back({"annotation", a.id, "dangling-image", "unknown image id " + std::to_string(a.image_id)});
    }
    if (!index.category(a.category_id)) {
      local.violations.push_back(
        {"annotation", a.id, "dangling-category", "unknown category id " + std::to_string(a.category_id)});
    }
    if (img) {
      check_annotation_geometry(a, *img, local);
    }
  });
  for (auto & local : per_annotation) {
    for (auto & v : local.violations) {
      report.violations.push_back(std::move(v));
    }
  }
  return report;
}

}  // namespace litterkit
