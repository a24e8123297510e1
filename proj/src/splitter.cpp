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

#include "litterkit/splitter.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_set>

#include "litterkit/error.hpp"
#include "litterkit/rng.hpp"

namespace litterkit
{

std::string_view part_name(SplitPart part)
{
  switch (part) {
    case SplitPart::Train:
      return "train";
    case SplitPart::Val:
      return "val";
    case SplitPart::Test:
      return "test";
  }
  return "train";
}

std::vector<Split> kfold_splits(const Dataset & d, int k, const SplitFractions & fractions, std::uint64_t seed)
{
  if (k < 1) {
    throw InvalidArgument("k must be at least 1");
  }
  if (!(fractions.train > 0) || !(fractions.val > 0) || !(fractions.test > 0)) {
    throw InvalidArgument("split fractions must be positive");
  }
  if (std::fabs(fractions.train + fractions.val + fractions.test - 1.0) > 1e-9) {
    throw InvalidArgument("split fractions must sum to 1");
  }
  const std::size_t n = d.images.size();
  if (n < static_cast<std::size_t>(k) * 3) {
    throw InvalidArgument(
      "need at least " + std::to_string(k * 3) + " images for " + std::to_string(k) + " folds, have " +
      std::to_string(n));
  }

  std::vector<std::int64_t> ids;
  ids.reserve(n);
  for (const auto & img : d.images) {
    ids.push_back(img.id);
  }
  std::sort(ids.begin(), ids.end());

  // A small guard keeps products like 100 * 0.1 from flooring to 9.
  const auto part_size = [n](double f) {
    return static_cast<std::size_t>(std::floor(static_cast<double>(n) * f + 1e-9));
  };
  const std::size_t n_val = part_size(fractions.val);
  const std::size_t n_test = part_size(fractions.test);

  std::vector<Split> folds;
  for (int fold = 0; fold < k; ++fold) {
    auto order = ids;
    auto rng = SplitMix64::stream(seed, static_cast<std::uint64_t>(fold));
    for (std::size_t i = order.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i) - 1));
      std::swap(order[i - 1], order[j]);
    }
    Split s;
    s.fold_index = fold;
    s.val.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_val));
    s.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_val),
                  order.begin() + static_cast<std::ptrdiff_t>(n_val + n_test));
    s.train.assign(order.begin() + static_cast<std::ptrdiff_t>(n_val + n_test), order.end());
    std::sort(s.train.begin(), s.train.end());
    std::sort(s.val.begin(), s.val.end());
    std::sort(s.test.begin(), s.test.end());
    folds.push_back(std::move(s));
  }
  return folds;
}

std::string format_split(const Split & split)
{
  std::vector<std::pair<std::int64_t, SplitPart>> rows;
  for (const auto id : split.train) rows.emplace_back(id, SplitPart::Train);
  for (const auto id : split.val) rows.emplace_back(id, SplitPart::Val);
  for (const auto id : split.test) rows.emplace_back(id, SplitPart::Test);
  std::sort(rows.begin(), rows.end());
  std::ostringstream os;
  for (const auto & [id, part] : rows) {
    os << id << ' ' << part_name(part) << '\n';
  }
  return os.str();
}

Split parse_split(std::string_view text, int fold_index)
{
  Split s;
  s.fold_index = fold_index;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    std::istringstream fields(line);
    std::int64_t id = 0;
    std::string part;
    if (!(fields >> id >> part)) {
      throw ParseError("split line " + std::to_string(line_no) + " is not '<image_id> <part>'", 0);
    }
    if (part == "train") {
      s.train.push_back(id);
    } else if (part == "val") {
      s.val.push_back(id);
    } else if (part == "test") {
      s.test.push_back(id);
    } else {
      throw ParseError("split line " + std::to_string(line_no) + ": unknown part '" + part + "'", 0);
    }
  }
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.val.begin(), s.val.end());
  std::sort(s.test.begin(), s.test.end());
  return s;
}

Dataset subset(const Dataset & d, const std::vector<std::int64_t> & image_ids)
{
  const std::unordered_set<std::int64_t> keep(image_ids.begin(), image_ids.end());
  Dataset out;
  out.categories = d.categories;
  out.scene_tags = d.scene_tags;
  out.extra = d.extra;
  for (const auto & img : d.images) {
    if (keep.count(img.id)) out.images.push_back(img);
  }
  for (const auto & a : d.annotations) {
    if (keep.count(a.image_id)) out.annotations.push_back(a);
  }
  for (const auto & s : d.scene_assignments) {
    if (keep.count(s.image_id)) out.scene_assignments.push_back(s);
  }
  return out;
}

}  // namespace litterkit
