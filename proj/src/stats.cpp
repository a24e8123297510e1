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

#include "litterkit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "litterkit/error.hpp"

namespace litterkit
{

namespace
{

std::string csv_field(const std::string & s)
{
  if (s.find_first_of(",\"\r\n") == std::string::npos) {
    return s;
  }
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') {
      out += '"';
    }
    out += c;
  }
  return out + "\"";
}

std::string csv_number(double v)
{
  if (v == std::floor(v) && std::fabs(v) < 1e15) {
    return std::to_string(static_cast<long long>(v));
  }
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

}  // namespace

std::string HistogramTable::to_csv() const
{
  std::ostringstream os;
  bool first = true;
  for (const auto & c : label_columns) {
    os << (first ? "" : ",") << csv_field(c);
    first = false;
  }
  for (const auto & c : value_columns) {
    os << (first ? "" : ",") << csv_field(c);
    first = false;
  }
  os << "\r\n";
  for (const auto & row : rows) {
    first = true;
    for (const auto & l : row.labels) {
      os << (first ? "" : ",") << csv_field(l);
      first = false;
    }
    for (const double v : row.values) {
      os << (first ? "" : ",") << csv_number(v);
      first = false;
    }
    os << "\r\n";
  }
  return os.str();
}

HistogramTable category_counts(const Dataset & d, CategoryLevel level)
{
  std::unordered_map<std::int64_t, std::string> label_of;
  for (const auto & c : d.categories) {
    label_of[c.id] = level == CategoryLevel::Category ? c.name : c.supercategory;
  }
  std::map<std::string, std::size_t> counts;
  for (const auto & a : d.annotations) {
    const auto it = label_of.find(a.category_id);
    if (it == label_of.end()) {
      throw IntegrityError("category", a.category_id, "annotation " + std::to_string(a.id));
    }
    ++counts[it->second];
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto & a, const auto & b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });

  HistogramTable t;
  t.label_columns = {level == CategoryLevel::Category ? "category" : "supercategory"};
  t.value_columns = {"annotations"};
  for (const auto & [name, n] : ranked) {
    t.rows.push_back({{name}, {static_cast<double>(n)}});
  }
  return t;
}

HistogramTable resolution_distribution(const Dataset & d)
{
  std::map<std::pair<int, int>, std::size_t> counts;
  for (const auto & img : d.images) {
    ++counts[{img.width, img.height}];
  }
  std::vector<std::pair<std::pair<int, int>, std::size_t>> rows(counts.begin(), counts.end());
  std::stable_sort(rows.begin(), rows.end(), [](const auto & a, const auto & b) { return a.second > b.second; });

  HistogramTable t;
  t.label_columns = {"width", "height"};
  t.value_columns = {"images", "megapixels"};
  for (const auto & [res, n] : rows) {
    t.rows.push_back(
      {{std::to_string(res.first), std::to_string(res.second)},
       {static_cast<double>(n), static_cast<double>(res.first) * res.second / 1e6}});
  }
  return t;
}

HistogramTable scene_tag_proportions(const Dataset & d)
{
  std::map<std::int64_t, std::set<std::int64_t>> images_by_tag;
  for (const auto & tag : d.scene_tags) {
    images_by_tag[tag.id];
  }
  for (const auto & s : d.scene_assignments) {
    images_by_tag[s.scene_tag_id].insert(s.image_id);
  }
  struct Entry
  {
    std::string name;
    std::size_t images;
  };
  std::vector<Entry> entries;
  for (const auto & tag : d.scene_tags) {
    entries.push_back({tag.name, images_by_tag[tag.id].size()});
  }
  std::stable_sort(entries.begin(), entries.end(), [](const Entry & a, const Entry & b) {
    return a.images != b.images ? a.images > b.images : a.name < b.name;
  });

  HistogramTable t;
  t.label_columns = {"scene_tag"};
  t.value_columns = {"images", "proportion"};
  const double total = static_cast<double>(d.images.size());
  for (const auto & e : entries) {
    const double n = static_cast<double>(e.images);
    t.rows.push_back({{e.name}, {n, total > 0 ? n / total : 0.0}});
  }
  return t;
}

std::size_t bbox_side_bin(double side)
{
  std::size_t bin = 0;
  while (bin < kBBoxSideEdges.size() && side >= kBBoxSideEdges[bin]) {
    ++bin;
  }
  return bin;
}

HistogramTable bbox_size_histogram(const Dataset & d, const TaxonomyMapping & m)
{
  constexpr std::size_t kBins = kBBoxSideEdges.size() + 1;
  std::vector<std::array<std::size_t, kBins>> counts(m.target_classes.size(), std::array<std::size_t, kBins>{});
  for (const auto & a : d.annotations) {
    const auto it = m.entries.find(a.category_id);
    if (it == m.entries.end()) {
      throw IntegrityError("category", a.category_id, "mapping does not cover annotation " + std::to_string(a.id));
    }
    const auto cls = m.class_id(it->second);
    if (cls == 0) {
      throw InvalidArgument("mapping target '" + it->second + "' is not a declared class");
    }
    const double side = std::sqrt(std::max(0.0, a.bbox.w * a.bbox.h));
    ++counts[static_cast<std::size_t>(cls - 1)][bbox_side_bin(side)];
  }

  HistogramTable t;
  t.label_columns = {"class"};
  double lo = 0;
  for (const double hi : kBBoxSideEdges) {
    t.value_columns.push_back("[" + csv_number(lo) + "," + csv_number(hi) + ")");
    lo = hi;
  }
  t.value_columns.push_back("[" + csv_number(lo) + ",inf)");
  for (std::size_t c = 0; c < m.target_classes.size(); ++c) {
    HistogramRow row{{m.target_classes[c]}, {}};
    for (const auto n : counts[c]) {
      row.values.push_back(static_cast<double>(n));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace litterkit
