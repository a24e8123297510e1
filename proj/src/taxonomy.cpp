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

#include "litterkit/taxonomy.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include "litterkit/error.hpp"

namespace litterkit
{

std::int64_t TaxonomyMapping::class_id(std::string_view name) const
{
  const auto it = std::find(target_classes.begin(), target_classes.end(), name);
  return it == target_classes.end() ? 0 : static_cast<std::int64_t>(it - target_classes.begin()) + 1;
}

TaxonomyMapping build_top_k_mapping(const Dataset & d, int k, std::string_view other_name)
{
  if (k < 1) {
    throw InvalidArgument("top-k mapping needs k >= 1");
  }
  if (d.annotations.empty()) {
    throw InvalidArgument("top-k mapping needs at least one annotation");
  }

  std::map<std::string, std::size_t> counts;
  std::unordered_map<std::int64_t, const Category *> by_id;
  for (const auto & c : d.categories) {
    counts.emplace(c.supercategory, 0);
    by_id.emplace(c.id, &c);
  }
  for (const auto & a : d.annotations) {
    const auto it = by_id.find(a.category_id);
    if (it == by_id.end()) {
      throw IntegrityError("category", a.category_id, "annotation " + std::to_string(a.id));
    }
    ++counts[it->second->supercategory];
  }
  if (static_cast<std::size_t>(k) > counts.size()) {
    throw InvalidArgument(
      "k=" + std::to_string(k) + " exceeds the " + std::to_string(counts.size()) + " supercategories");
  }

  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto & a, const auto & b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });

  TaxonomyMapping m;
  for (int i = 0; i < k; ++i) {
    m.target_classes.push_back(ranked[static_cast<std::size_t>(i)].first);
  }
  bool uses_other = false;
  for (const auto & c : d.categories) {
    if (std::find(m.target_classes.begin(), m.target_classes.end(), c.supercategory) != m.target_classes.end()) {
      m.entries[c.id] = c.supercategory;
    } else {
      m.entries[c.id] = std::string(other_name);
      uses_other = true;
    }
  }
  if (uses_other && m.class_id(other_name) == 0) {
    m.target_classes.emplace_back(other_name);
  }
  return m;
}

TaxonomyMapping classless_mapping(const Dataset & d)
{
  TaxonomyMapping m;
  m.target_classes.emplace_back(kLitter);
  for (const auto & c : d.categories) {
    m.entries[c.id] = std::string(kLitter);
  }
  return m;
}

Dataset remap(const Dataset & d, const TaxonomyMapping & m)
{
  for (const auto & [id, target] : m.entries) {
    if (m.class_id(target) == 0) {
      throw InvalidArgument("mapping target '" + target + "' is not a declared class");
    }
  }
  Dataset out;
  out.images = d.images;
  out.scene_tags = d.scene_tags;
  out.scene_assignments = d.scene_assignments;
  out.extra = d.extra;
  for (std::size_t i = 0; i < m.target_classes.size(); ++i) {
    Category c;
    c.id = static_cast<std::int64_t>(i) + 1;
    c.name = m.target_classes[i];
    c.supercategory = m.target_classes[i];
    out.categories.push_back(std::move(c));
  }
  out.annotations.reserve(d.annotations.size());
  for (const auto & a : d.annotations) {
    const auto it = m.entries.find(a.category_id);
    if (it == m.entries.end()) {
      throw IntegrityError("category", a.category_id, "mapping does not cover annotation " + std::to_string(a.id));
    }
    Annotation b = a;
    b.category_id = m.class_id(it->second);
    out.annotations.push_back(std::move(b));
  }
  return out;
}

std::string export_mapping(const Dataset & d, const TaxonomyMapping & m)
{
  std::vector<Category> categories = d.categories;
  std::sort(categories.begin(), categories.end(), [](const Category & a, const Category & b) { return a.id < b.id; });
  std::ostringstream os;
  for (const auto & target : m.target_classes) {
    for (const auto & c : categories) {
      const auto it = m.entries.find(c.id);
      if (it != m.entries.end() && it->second == target) {
        os << c.name << '\t' << target << '\n';
      }
    }
  }
  return os.str();
}

TaxonomyMapping import_mapping(const Dataset & d, std::string_view text)
{
  std::unordered_map<std::string, std::vector<std::int64_t>> ids_by_name;
  for (const auto & c : d.categories) {
    ids_by_name[c.name].push_back(c.id);
  }
  TaxonomyMapping m;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty() || line.front() == '#') {
      continue;
    }
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size()) {
      throw ParseError("mapping line " + std::to_string(line_no) + " needs two tab-separated columns", 0);
    }
    const std::string source = line.substr(0, tab);
    const std::string target = line.substr(tab + 1);
    const auto it = ids_by_name.find(source);
    if (it == ids_by_name.end()) {
      throw ParseError("mapping line " + std::to_string(line_no) + ": unknown category '" + source + "'", 0);
    }
    if (m.class_id(target) == 0) {
      m.target_classes.push_back(target);
    }
    for (const auto id : it->second) {
      m.entries[id] = target;
    }
  }
  return m;
}

}  // namespace litterkit
