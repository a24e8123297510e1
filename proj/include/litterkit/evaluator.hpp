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
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "litterkit/dataset.hpp"
#include "litterkit/segmentation.hpp"

namespace litterkit
{

/// A predicted instance. probs holds N class probabilities followed by the
/// background probability; class k (1-based) is probs[k - 1].
struct Detection
{
  std::int64_t id = 0;
  std::int64_t image_id = 0;
  Segmentation segmentation;
  std::vector<double> probs;
};

enum class ScoreKind { Class, Litter, Ratio };

std::string_view score_kind_name(ScoreKind kind);
/// "class", "litter" or "ratio"; throws InvalidArgument otherwise.
ScoreKind parse_score_kind(std::string_view name);

inline constexpr double kDefaultEpsilon = 1e-6;

struct ScoreSpec
{
  ScoreKind kind = ScoreKind::Ratio;
  double epsilon = kDefaultEpsilon;
};

/// Ranking score of a probability vector:
///   class  -> max_i p_i over the N classes
///   litter -> 1 - p_background
///   ratio  -> max_i p_i / (p_background + epsilon)
double score(std::span<const double> probs, const ScoreSpec & spec);

/// 1-based argmax over the N class entries, ties to the lowest index.
std::int64_t predicted_class(std::span<const double> probs);

/// Throws InvalidArgument unless probs has >= 2 non-negative entries summing
/// to 1 within 1e-6.
void check_probs(std::span<const double> probs);

/// 0.50, 0.55, ..., 0.95.
std::vector<double> coco_iou_thresholds();

struct EvalConfig
{
  std::vector<double> iou_thresholds = coco_iou_thresholds();
  bool class_agnostic = false;
  ScoreSpec score;
};

struct GroundTruthInstance
{
  std::int64_t id = 0;
  std::int64_t image_id = 0;
  std::int64_t class_id = 0;
  double bbox_area = 0;
};

struct DetectionInstance
{
  std::int64_t id = 0;
  std::int64_t image_id = 0;
  std::int64_t class_id = 0;  // predicted_class(probs)
  std::vector<double> probs;
};

/// Ground truth and detections rasterized once, with the mask IoU of every
/// (detection, ground truth) pair sharing an image. Ground-truth class ids
/// are the dataset's category ids, which must line up with the detection
/// probability vector positions (see remap()).
class EvalData
{
public:
  EvalData(const Dataset & ground_truth, std::span<const Detection> detections);

  const std::vector<GroundTruthInstance> & ground_truths() const { return gts_; }
  const std::vector<DetectionInstance> & detections() const { return dets_; }

  /// Ground-truth indices sharing the detection's image.
  const std::vector<std::size_t> & candidates(std::size_t det) const;
  /// Mask IoU, 0 for instances on different images.
  double iou(std::size_t det, std::size_t gt) const;

  /// Largest class id seen in ground truth, categories or probability vectors.
  std::int64_t num_classes() const { return num_classes_; }
  std::string class_name(std::int64_t class_id) const;

private:
  struct ImageBlock
  {
    std::vector<std::size_t> gts;
    std::vector<std::size_t> dets;
    std::vector<double> iou;  // dets x gts, row-major
  };

  std::vector<GroundTruthInstance> gts_;
  std::vector<DetectionInstance> dets_;
  std::vector<ImageBlock> blocks_;
  std::vector<std::size_t> det_block_;
  std::vector<std::size_t> det_row_;
  std::vector<std::size_t> gt_block_;
  std::vector<std::size_t> gt_col_;
  std::map<std::int64_t, std::string> class_names_;
  std::int64_t num_classes_ = 0;
};

/// One row of the match ledger. False positives carry no gt_id; their iou is
/// the best overlap with any eligible ground truth.
struct Match
{
  std::int64_t detection_id = 0;
  std::optional<std::int64_t> gt_id;
  std::int64_t image_id = 0;
  double iou = 0;
  double score = 0;
  std::int64_t detection_class = 0;
  std::int64_t gt_class = 0;
};

struct MatchResult
{
  std::vector<Match> ledger;  // detections in rank order
  std::vector<std::int64_t> unmatched_gts;

  std::size_t true_positives() const;
  std::size_t false_positives() const;
  std::size_t false_negatives() const { return unmatched_gts.size(); }
};

/// Greedy matching. Detections scoring above `min_score` are visited by
/// descending score (ties by ascending id); each claims the unmatched ground
/// truth on its image with the highest IoU >= iou_threshold (ties by lowest
/// gt id), restricted to its predicted class unless class_agnostic.
MatchResult match_detections(
  const EvalData & data, double iou_threshold, bool class_agnostic, const ScoreSpec & spec,
  double min_score = -std::numeric_limits<double>::infinity());

/// Interpolated AP over 101 recall points for a ranked list of hit flags:
/// the precision at recall r is the maximum precision at any recall >= r.
/// Returns a fraction in [0, 1].
double interpolated_ap(const std::vector<bool> & hits_in_rank_order, std::size_t num_ground_truth);

struct ClassAp
{
  std::int64_t class_id = 0;  // 0 for the pooled class-agnostic class
  std::string name;
  std::size_t num_ground_truth = 0;
  std::size_t num_detections = 0;
  double ap = 0;                         // percent
  std::vector<double> ap_per_threshold;  // percent
};

struct EvalReport
{
  EvalConfig config;
  std::vector<ClassAp> classes;
  double mean_ap = 0;                    // percent
  std::vector<double> ap_per_threshold;  // percent, mean over classes
  std::vector<Match> ledger;             // at the first threshold
};

/// Per class and IoU threshold, AP from the ranked match ledger; averaged
/// over thresholds, then over the classes that have ground truth (classes
/// with none are excluded, not scored 0). Class-agnostic mode pools all
/// classes into one. Results are reported x100.
EvalReport average_precision(const EvalData & data, const EvalConfig & config);
/// Same, ranking by caller-supplied scores (one per detection, in
/// data.detections() order) instead of config.score.
EvalReport average_precision(const EvalData & data, const EvalConfig & config, std::span<const double> scores);

nlohmann::json to_json(const EvalReport & report);

struct ConfusionMatrix
{
  std::vector<std::string> labels;                // labels[0] == "BG"
  std::vector<std::vector<std::size_t>> counts;   // [predicted][ground truth]
  std::size_t matched = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;

  std::size_t total() const;
  /// Each ground-truth column divided by its sum (all-zero columns stay 0).
  std::vector<std::vector<double>> normalized_by_ground_truth() const;
  /// Rows are predicted classes, columns ground-truth classes.
  std::string to_csv(bool normalized = false) const;
};

/// Detections with score > score_threshold, matched class-agnostically at
/// `iou_threshold`. Matched pairs land in [pred][gt], unmatched detections in
/// [pred][BG] (first column), unmatched ground truth in [BG][gt] (first row).
ConfusionMatrix confusion_matrix(
  const EvalData & data, double score_threshold, const ScoreSpec & spec, double iou_threshold = 0.5);

struct ScatterRow
{
  std::int64_t id = 0;
  double x = 0;
  double y = 0;
};

struct ScatterTable
{
  std::string id_label;
  std::string x_label;
  std::string y_label;
  std::vector<ScatterRow> rows;

  std::string to_csv() const;
};

/// One row per detection: (score, best IoU against eligible ground truth on
/// its image, 0 if none). Eligible means same class unless class_agnostic.
ScatterTable iou_score_scatter(const EvalData & data, const EvalConfig & config);

/// One row per ground truth: (bbox area, best IoU any detection reaches).
ScatterTable area_iou_scatter(const EvalData & data);

/// Parses a detections file: an array of {image_id, segmentation, probs} with
/// an optional integer id (default: 1-based position).
std::vector<Detection> parse_detections(std::string_view text);
std::string serialize_detections(std::span<const Detection> detections);

/// AP values of one fold laid out as rows (tasks) x columns (score kinds).
struct ApTable
{
  std::vector<std::string> rows;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> values;
};

struct SummaryTable
{
  std::vector<std::string> rows;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> mean;
  std::vector<std::vector<double>> stddev;  // sample standard deviation

  /// "Dataset,<columns...>" header, then "<row>,<mean> ± <std>,..." with one
  /// decimal place.
  std::string format(std::string_view corner = "Dataset") const;
};

/// Cell-wise mean and sample standard deviation over folds. Needs >= 2
/// tables of identical shape and labels.
SummaryTable cross_validation_summary(std::span<const ApTable> folds);

}  // namespace litterkit
