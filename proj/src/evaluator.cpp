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

#include "litterkit/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "litterkit/error.hpp"
#include "litterkit/mask_ops.hpp"
#include "litterkit/parallel.hpp"

namespace litterkit
{

using nlohmann::json;

std::string_view score_kind_name(ScoreKind kind)
{
  switch (kind) {
    case ScoreKind::Class:
      return "class";
    case ScoreKind::Litter:
      return "litter";
    case ScoreKind::Ratio:
      return "ratio";
  }
  return "ratio";
}

ScoreKind parse_score_kind(std::string_view name)
{
  if (name == "class") return ScoreKind::Class;
  if (name == "litter") return ScoreKind::Litter;
  if (name == "ratio") return ScoreKind::Ratio;
  throw InvalidArgument("unknown score kind '" + std::string(name) + "'");
}

double score(std::span<const double> probs, const ScoreSpec & spec)
{
  if (probs.size() < 2) {
    throw InvalidArgument("probability vector needs at least one class and background");
  }
  const double background = probs.back();
  const double best = *std::max_element(probs.begin(), probs.end() - 1);
  switch (spec.kind) {
    case ScoreKind::Class:
      return best;
    case ScoreKind::Litter:
      return 1.0 - background;
    case ScoreKind::Ratio:
      if (!(spec.epsilon > 0)) {
        throw InvalidArgument("ratio score epsilon must be positive");
      }
      return best / (background + spec.epsilon);
  }
  return best;
}

std::int64_t predicted_class(std::span<const double> probs)
{
  if (probs.size() < 2) {
    throw InvalidArgument("probability vector needs at least one class and background");
  }
  // max_element returns the first maximum.
  return static_cast<std::int64_t>(std::max_element(probs.begin(), probs.end() - 1) - probs.begin()) + 1;
}

void check_probs(std::span<const double> probs)
{
  if (probs.size() < 2) {
    throw InvalidArgument("probability vector needs at least one class and background");
  }
  double sum = 0;
  for (const double p : probs) {
    if (!(p >= 0) || !std::isfinite(p)) {
      throw InvalidArgument("probabilities must be finite and non-negative");
    }
    sum += p;
  }
  if (std::fabs(sum - 1.0) > 1e-6) {
    throw InvalidArgument("probabilities sum to " + std::to_string(sum) + ", expected 1");
  }
}

std::vector<double> coco_iou_thresholds()
{
  std::vector<double> t;
  for (int i = 0; i < 10; ++i) {
    t.push_back((50 + 5 * i) / 100.0);
  }
  return t;
}

EvalData::EvalData(const Dataset & ground_truth, std::span<const Detection> detections)
{
  for (const auto & c : ground_truth.categories) {
    class_names_[c.id] = c.name;
    num_classes_ = std::max(num_classes_, c.id);
  }

  std::unordered_map<std::int64_t, std::size_t> block_of_image;
  std::vector<const ImageRecord *> block_image;
  for (const auto & img : ground_truth.images) {
    if (block_of_image.emplace(img.id, blocks_.size()).second) {
      blocks_.emplace_back();
      block_image.push_back(&img);
    }
  }

  for (const auto & a : ground_truth.annotations) {
    const auto it = block_of_image.find(a.image_id);
    if (it == block_of_image.end()) {
      throw IntegrityError("image", a.image_id, "ground truth " + std::to_string(a.id));
    }
    gt_block_.push_back(it->second);
    gt_col_.push_back(blocks_[it->second].gts.size());
    blocks_[it->second].gts.push_back(gts_.size());
    gts_.push_back({a.id, a.image_id, a.category_id, a.bbox.area()});
    num_classes_ = std::max(num_classes_, a.category_id);
  }

  for (const auto & d : detections) {
    const auto it = block_of_image.find(d.image_id);
    if (it == block_of_image.end()) {
      throw IntegrityError("image", d.image_id, "detection " + std::to_string(d.id));
    }
    try {
      check_probs(d.probs);
    } catch (const InvalidArgument & e) {
      throw InvalidArgument("detection " + std::to_string(d.id) + ": " + e.what());
    }
    det_block_.push_back(it->second);
    det_row_.push_back(blocks_[it->second].dets.size());
    blocks_[it->second].dets.push_back(dets_.size());
    dets_.push_back({d.id, d.image_id, predicted_class(d.probs), d.probs});
    num_classes_ = std::max(num_classes_, static_cast<std::int64_t>(d.probs.size()) - 1);
  }

  parallel_for(blocks_.size(), [&](std::size_t b) {
    ImageBlock & block = blocks_[b];
    if (block.gts.empty() || block.dets.empty()) {
      return;
    }
    const ImageRecord & img = *block_image[b];
    std::vector<LocalMask> gt_masks;
    for (const auto g : block.gts) {
      gt_masks.push_back(rasterize_local(ground_truth.annotations[g].segmentation, img.width, img.height));
    }
    block.iou.assign(block.dets.size() * block.gts.size(), 0.0);
    for (std::size_t r = 0; r < block.dets.size(); ++r) {
      const LocalMask det = rasterize_local(detections[block.dets[r]].segmentation, img.width, img.height);
      for (std::size_t c = 0; c < block.gts.size(); ++c) {
        block.iou[r * block.gts.size() + c] = local_iou(det, gt_masks[c]);
      }
    }
  });
}

const std::vector<std::size_t> & EvalData::candidates(std::size_t det) const
{
  return blocks_[det_block_[det]].gts;
}

double EvalData::iou(std::size_t det, std::size_t gt) const
{
  if (det_block_[det] != gt_block_[gt]) {
    return 0.0;
  }
  const ImageBlock & block = blocks_[det_block_[det]];
  return block.iou[det_row_[det] * block.gts.size() + gt_col_[gt]];
}

std::string EvalData::class_name(std::int64_t class_id) const
{
  const auto it = class_names_.find(class_id);
  return it != class_names_.end() ? it->second : "class " + std::to_string(class_id);
}

std::size_t MatchResult::true_positives() const
{
  return static_cast<std::size_t>(
    std::count_if(ledger.begin(), ledger.end(), [](const Match & m) { return m.gt_id.has_value(); }));
}

std::size_t MatchResult::false_positives() const
{
  return ledger.size() - true_positives();
}

namespace
{

// Detection indices by descending score, ties by ascending id.
std::vector<std::size_t> rank_detections(const EvalData & data, const std::vector<double> & scores)
{
  std::vector<std::size_t> order(data.detections().size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) {
      return scores[a] > scores[b];
    }
    return data.detections()[a].id < data.detections()[b].id;
  });
  return order;
}

std::vector<double> all_scores(const EvalData & data, const ScoreSpec & spec)
{
  std::vector<double> scores;
  scores.reserve(data.detections().size());
  for (const auto & d : data.detections()) {
    scores.push_back(score(d.probs, spec));
  }
  return scores;
}

MatchResult match_with_scores(
  const EvalData & data, const std::vector<double> & scores, double iou_threshold, bool class_agnostic,
  double min_score)
{
  const auto & gts = data.ground_truths();
  const auto & dets = data.detections();
  std::vector<bool> taken(gts.size(), false);
  MatchResult result;

  for (const std::size_t d : rank_detections(data, scores)) {
    if (!(scores[d] > min_score)) {
      continue;
    }
    Match m;
    m.detection_id = dets[d].id;
    m.image_id = dets[d].image_id;
    m.score = scores[d];
    m.detection_class = dets[d].class_id;

    std::optional<std::size_t> best;
    double best_iou = -1;
    double best_any = 0;
    for (const std::size_t g : data.candidates(d)) {
      if (!class_agnostic && gts[g].class_id != dets[d].class_id) {
        continue;
      }
      const double iou = data.iou(d, g);
      best_any = std::max(best_any, iou);
      if (taken[g] || iou < iou_threshold) {
        continue;
      }
      if (iou > best_iou || (iou == best_iou && gts[g].id < gts[*best].id)) {
        best = g;
        best_iou = iou;
      }
    }
    if (best) {
      taken[*best] = true;
      m.gt_id = gts[*best].id;
      m.gt_class = gts[*best].class_id;
      m.iou = best_iou;
    } else {
      m.iou = best_any;
    }
    result.ledger.push_back(m);
  }

  for (std::size_t g = 0; g < gts.size(); ++g) {
    if (!taken[g]) {
      result.unmatched_gts.push_back(gts[g].id);
    }
  }
  std::sort(result.unmatched_gts.begin(), result.unmatched_gts.end());
  return result;
}

}  // namespace

MatchResult match_detections(
  const EvalData & data, double iou_threshold, bool class_agnostic, const ScoreSpec & spec, double min_score)
{
  return match_with_scores(data, all_scores(data, spec), iou_threshold, class_agnostic, min_score);
}

double interpolated_ap(const std::vector<bool> & hits_in_rank_order, std::size_t num_ground_truth)
{
  if (num_ground_truth == 0) {
    return 0.0;
  }
  const std::size_t n = hits_in_rank_order.size();
  std::vector<double> precision(n);
  std::vector<double> recall(n);
  std::size_t tp = 0;
  for (std::size_t i = 0; i < n; ++i) {
    tp += hits_in_rank_order[i] ? 1 : 0;
    precision[i] = static_cast<double>(tp) / static_cast<double>(i + 1);
    recall[i] = static_cast<double>(tp) / static_cast<double>(num_ground_truth);
  }
  // Running maximum from the right makes precision non-increasing in rank.
  for (std::size_t i = n; i-- > 1;) {
    precision[i - 1] = std::max(precision[i - 1], precision[i]);
  }
  double sum = 0;
  std::size_t i = 0;
  for (int j = 0; j <= 100; ++j) {
    const double r = j / 100.0;
    while (i < n && recall[i] < r) {
      ++i;
    }
    sum += i < n ? precision[i] : 0.0;
  }
  return sum / 101.0;
}

EvalReport average_precision(const EvalData & data, const EvalConfig & config)
{
  const std::vector<double> scores = all_scores(data, config.score);
  return average_precision(data, config, scores);
}

EvalReport average_precision(const EvalData & data, const EvalConfig & config, std::span<const double> given)
{
  if (given.size() != data.detections().size()) {
    throw InvalidArgument("one score per detection is required");
  }
  if (config.iou_thresholds.empty()) {
    throw InvalidArgument("at least one IoU threshold is required");
  }
  for (std::size_t i = 0; i < config.iou_thresholds.size(); ++i) {
    const double t = config.iou_thresholds[i];
    if (!(t > 0 && t <= 1)) {
      throw InvalidArgument("IoU thresholds must lie in (0, 1]");
    }
    if (i > 0 && !(t > config.iou_thresholds[i - 1])) {
      throw InvalidArgument("IoU thresholds must be strictly increasing");
    }
  }

  const auto & gts = data.ground_truths();
  const auto & dets = data.detections();
  const std::vector<double> scores(given.begin(), given.end());

  // Scored classes: those present in ground truth, or one pooled class.
  std::map<std::int64_t, std::size_t> gt_count;
  for (const auto & g : gts) {
    ++gt_count[config.class_agnostic ? 0 : g.class_id];
  }
  const auto class_of_det = [&](const Match & m) { return config.class_agnostic ? 0 : m.detection_class; };

  EvalReport report;
  report.config = config;
  for (const auto & [cls, n] : gt_count) {
    ClassAp c;
    c.class_id = cls;
    c.name = config.class_agnostic ? "all" : data.class_name(cls);
    c.num_ground_truth = n;
    c.num_detections = static_cast<std::size_t>(std::count_if(dets.begin(), dets.end(), [&](const DetectionInstance & d) {
      return config.class_agnostic || d.class_id == cls;
    }));
    report.classes.push_back(std::move(c));
  }

  for (std::size_t t = 0; t < config.iou_thresholds.size(); ++t) {
    const MatchResult matches = match_with_scores(
      data, scores, config.iou_thresholds[t], config.class_agnostic, -std::numeric_limits<double>::infinity());
    if (t == 0) {
      report.ledger = matches.ledger;
    }
    for (auto & c : report.classes) {
      std::vector<bool> hits;
      for (const auto & m : matches.ledger) {
        if (class_of_det(m) == c.class_id) {
          hits.push_back(m.gt_id.has_value());
        }
      }
      c.ap_per_threshold.push_back(100.0 * interpolated_ap(hits, c.num_ground_truth));
    }
  }

  const double thresholds = static_cast<double>(config.iou_thresholds.size());
  report.ap_per_threshold.assign(config.iou_thresholds.size(), 0.0);
  for (auto & c : report.classes) {
    c.ap = std::accumulate(c.ap_per_threshold.begin(), c.ap_per_threshold.end(), 0.0) / thresholds;
    report.mean_ap += c.ap;
    for (std::size_t t = 0; t < c.ap_per_threshold.size(); ++t) {
      report.ap_per_threshold[t] += c.ap_per_threshold[t];
    }
  }
  if (!report.classes.empty()) {
    const double n = static_cast<double>(report.classes.size());
    report.mean_ap /= n;
    for (auto & v : report.ap_per_threshold) {
      v /= n;
    }
  }
  return report;
}

json to_json(const EvalReport & report)
{
  json classes = json::array();
  for (const auto & c : report.classes) {
    classes.push_back(
      {{"class_id", c.class_id},
       {"name", c.name},
       {"num_ground_truth", c.num_ground_truth},
       {"num_detections", c.num_detections},
       {"ap", c.ap},
       {"ap_per_threshold", c.ap_per_threshold}});
  }
  json ledger = json::array();
  for (const auto & m : report.ledger) {
    ledger.push_back(
      {{"detection_id", m.detection_id},
       {"gt_id", m.gt_id ? json(*m.gt_id) : json(nullptr)},
       {"image_id", m.image_id},
       {"iou", m.iou},
       {"score", m.score},
       {"detection_class", m.detection_class},
       {"gt_class", m.gt_id ? json(m.gt_class) : json(nullptr)}});
  }
  return {
    {"config",
     {{"iou_thresholds", report.config.iou_thresholds},
      {"class_agnostic", report.config.class_agnostic},
      {"score", score_kind_name(report.config.score.kind)},
      {"epsilon", report.config.score.epsilon}}},
    {"mean_ap", report.mean_ap},
    {"ap_per_threshold", report.ap_per_threshold},
    {"classes", classes},
    {"ledger", ledger}};
}

std::size_t ConfusionMatrix::total() const
{
  std::size_t sum = 0;
  for (const auto & row : counts) {
    sum += std::accumulate(row.begin(), row.end(), std::size_t{0});
  }
  return sum;
}

std::vector<std::vector<double>> ConfusionMatrix::normalized_by_ground_truth() const
{
  std::vector<std::vector<double>> out(counts.size(), std::vector<double>(labels.size(), 0.0));
  for (std::size_t col = 0; col < labels.size(); ++col) {
    std::size_t column_sum = 0;
    for (const auto & row : counts) {
      column_sum += row[col];
    }
    if (column_sum == 0) {
      continue;
    }
    for (std::size_t r = 0; r < counts.size(); ++r) {
      out[r][col] = static_cast<double>(counts[r][col]) / static_cast<double>(column_sum);
    }
  }
  return out;
}

namespace
{

std::string csv_escape(const std::string & s)
{
  if (s.find_first_of(",\"\r\n") == std::string::npos) {
    return s;
  }
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string real(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string ConfusionMatrix::to_csv(bool normalized) const
{
  const auto norm = normalized ? normalized_by_ground_truth() : std::vector<std::vector<double>>{};
  std::ostringstream os;
  os << "predicted\\ground_truth";
  for (const auto & l : labels) {
    os << ',' << csv_escape(l);
  }
  os << "\r\n";
  for (std::size_t r = 0; r < counts.size(); ++r) {
    os << csv_escape(labels[r]);
    for (std::size_t c = 0; c < labels.size(); ++c) {
      os << ',';
      if (normalized) {
        os << real(norm[r][c]);
      } else {
        os << counts[r][c];
      }
    }
    os << "\r\n";
  }
  return os.str();
}

ConfusionMatrix confusion_matrix(
  const EvalData & data, double score_threshold, const ScoreSpec & spec, double iou_threshold)
{
  const MatchResult matches = match_with_scores(data, all_scores(data, spec), iou_threshold, true, score_threshold);
  const auto n = static_cast<std::size_t>(data.num_classes());

  ConfusionMatrix cm;
  cm.labels.push_back("BG");
  for (std::size_t c = 1; c <= n; ++c) {
    cm.labels.push_back(data.class_name(static_cast<std::int64_t>(c)));
  }
  cm.counts.assign(n + 1, std::vector<std::size_t>(n + 1, 0));
  const auto slot = [n](std::int64_t cls) {
    if (cls < 1 || static_cast<std::size_t>(cls) > n) {
      throw InvalidArgument("class id " + std::to_string(cls) + " outside the confusion matrix");
    }
    return static_cast<std::size_t>(cls);
  };

  for (const auto & m : matches.ledger) {
    if (m.gt_id) {
      ++cm.counts[slot(m.detection_class)][slot(m.gt_class)];
      ++cm.matched;
    } else {
      ++cm.counts[slot(m.detection_class)][0];
      ++cm.false_positives;
    }
  }
  std::unordered_map<std::int64_t, std::int64_t> class_of_gt;
  for (const auto & g : data.ground_truths()) {
    class_of_gt[g.id] = g.class_id;
  }
  for (const auto id : matches.unmatched_gts) {
    ++cm.counts[0][slot(class_of_gt.at(id))];
    ++cm.false_negatives;
  }
  return cm;
}

std::string ScatterTable::to_csv() const
{
  std::ostringstream os;
  os << id_label << ',' << x_label << ',' << y_label << "\r\n";
  for (const auto & r : rows) {
    os << r.id << ',' << real(r.x) << ',' << real(r.y) << "\r\n";
  }
  return os.str();
}

ScatterTable iou_score_scatter(const EvalData & data, const EvalConfig & config)
{
  ScatterTable table{"detection_id", std::string(score_kind_name(config.score.kind)) + "_score", "best_iou", {}};
  const auto & gts = data.ground_truths();
  const auto & dets = data.detections();
  for (std::size_t d = 0; d < dets.size(); ++d) {
    double best = 0;
    for (const std::size_t g : data.candidates(d)) {
      if (config.class_agnostic || gts[g].class_id == dets[d].class_id) {
        best = std::max(best, data.iou(d, g));
      }
    }
    table.rows.push_back({dets[d].id, score(dets[d].probs, config.score), best});
  }
  return table;
}

ScatterTable area_iou_scatter(const EvalData & data)
{
  ScatterTable table{"gt_id", "bbox_area", "best_iou", {}};
  const auto & gts = data.ground_truths();
  std::vector<double> best(gts.size(), 0.0);
  for (std::size_t d = 0; d < data.detections().size(); ++d) {
    for (const std::size_t g : data.candidates(d)) {
      best[g] = std::max(best[g], data.iou(d, g));
    }
  }
  for (std::size_t g = 0; g < gts.size(); ++g) {
    table.rows.push_back({gts[g].id, gts[g].bbox_area, best[g]});
  }
  return table;
}

std::vector<Detection> parse_detections(std::string_view text)
{
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error & e) {
    throw ParseError(std::string("malformed detections file: ") + e.what(), e.byte);
  }
  if (!root.is_array()) {
    throw ParseError("detections file must contain an array", 0);
  }
  std::vector<Detection> out;
  try {
    for (std::size_t i = 0; i < root.size(); ++i) {
      const json & j = root[i];
      Detection d;
      d.id = j.contains("id") ? j.at("id").get<std::int64_t>() : static_cast<std::int64_t>(i) + 1;
      d.image_id = j.at("image_id").get<std::int64_t>();
      d.segmentation = segmentation_from_json(j.at("segmentation"));
      d.probs = j.at("probs").get<std::vector<double>>();
      out.push_back(std::move(d));
    }
  } catch (const json::exception & e) {
    throw ParseError(std::string("detections schema error: ") + e.what(), 0);
  }
  return out;
}

std::string serialize_detections(std::span<const Detection> detections)
{
  json arr = json::array();
  for (const auto & d : detections) {
    arr.push_back(
      {{"id", d.id}, {"image_id", d.image_id}, {"segmentation", segmentation_to_json(d.segmentation)}, {"probs", d.probs}});
  }
  return arr.dump() + "\n";
}

std::string SummaryTable::format(std::string_view corner) const
{
  std::ostringstream os;
  os << corner;
  for (const auto & c : columns) {
    os << ',' << c;
  }
  os << '\n';
  for (std::size_t r = 0; r < rows.size(); ++r) {
    os << rows[r];
    for (std::size_t c = 0; c < columns.size(); ++c) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.1f ± %.1f", mean[r][c], stddev[r][c]);
      os << ',' << buf;
    }
    os << '\n';
  }
  return os.str();
}

SummaryTable cross_validation_summary(std::span<const ApTable> folds)
{
  if (folds.size() < 2) {
    throw InvalidArgument("cross-validation summary needs at least two folds");
  }
  const ApTable & first = folds.front();
  for (const auto & f : folds) {
    bool same = f.rows == first.rows && f.columns == first.columns && f.values.size() == first.rows.size();
    for (std::size_t r = 0; same && r < f.values.size(); ++r) {
      same = f.values[r].size() == first.columns.size();
    }
    if (!same) {
      throw InvalidArgument("fold tables differ in shape or labels");
    }
  }

  SummaryTable s;
  s.rows = first.rows;
  s.columns = first.columns;
  const double n = static_cast<double>(folds.size());
  s.mean.assign(s.rows.size(), std::vector<double>(s.columns.size(), 0.0));
  s.stddev = s.mean;
  for (std::size_t r = 0; r < s.rows.size(); ++r) {
    for (std::size_t c = 0; c < s.columns.size(); ++c) {
      double sum = 0;
      for (const auto & f : folds) sum += f.values[r][c];
      const double mean = sum / n;
      double ss = 0;
      for (const auto & f : folds) ss += (f.values[r][c] - mean) * (f.values[r][c] - mean);
      s.mean[r][c] = mean;
      s.stddev[r][c] = std::sqrt(ss / (n - 1));
    }
  }
  return s;
}

}  // namespace litterkit
