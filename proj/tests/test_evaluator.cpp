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

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <random>

#include "fixtures.hpp"
#include "litterkit/error.hpp"
#include "litterkit/evaluator.hpp"
#include "oracles.hpp"
#include "scenes.hpp"

using namespace litterkit;
using namespace litterkit::testing;

namespace
{

PolygonList box(int x, int y, int w, int h)
{
  const double x0 = x, y0 = y, x1 = x + w, y1 = y + h;
  return {{x0, y0, x1, y0, x1, y1, x0, y1}};
}

Dataset scene(int classes, std::vector<Annotation> gts)
{
  Dataset d;
  d.images.push_back({1, "a.png", 64, 64});
  d.images.push_back({2, "b.png", 64, 64});
  for (int c = 1; c <= classes; ++c) {
    d.categories.push_back({c, "c" + std::to_string(c), "c" + std::to_string(c)});
  }
  d.annotations = std::move(gts);
  return d;
}

Detection det(std::int64_t id, std::int64_t image, Segmentation seg, std::vector<double> probs)
{
  return {id, image, std::move(seg), std::move(probs)};
}

EvalConfig single(double t, bool agnostic = false, ScoreKind kind = ScoreKind::Class)
{
  EvalConfig c;
  c.iou_thresholds = {t};
  c.class_agnostic = agnostic;
  c.score.kind = kind;
  return c;
}

}  // namespace

TEST_CASE("score kinds")
{
  const std::vector<double> p{0.7, 0.2, 0.1};
  CHECK(score(p, {ScoreKind::Class}) == doctest::Approx(0.7));
  CHECK(score(p, {ScoreKind::Litter}) == doctest::Approx(0.9));
  CHECK(score(p, {ScoreKind::Ratio, 1e-6}) == doctest::Approx(0.7 / (0.1 + 1e-6)));

  const std::vector<double> bg{0, 0, 1};
  CHECK(score(bg, {ScoreKind::Class}) == 0);
  CHECK(score(bg, {ScoreKind::Litter}) == 0);
  CHECK(score(bg, {ScoreKind::Ratio}) == 0);

  const std::vector<double> pure{1, 0, 0};
  CHECK(score(pure, {ScoreKind::Litter}) == 1);
  CHECK(score(pure, {ScoreKind::Ratio, 1e-6}) == doctest::Approx(1e6));
  CHECK_THROWS_AS(score(pure, {ScoreKind::Ratio, 0.0}), InvalidArgument);
  CHECK_THROWS_AS(score(std::vector<double>{1.0}, {}), InvalidArgument);

  CHECK(parse_score_kind("litter") == ScoreKind::Litter);
  CHECK(score_kind_name(ScoreKind::Ratio) == "ratio");
  CHECK_THROWS_AS(parse_score_kind("max"), InvalidArgument);
}

TEST_CASE("predicted class")
{
  CHECK(predicted_class(std::vector<double>{0.7, 0.2, 0.1}) == 1);
  CHECK(predicted_class(std::vector<double>{0.4, 0.4, 0.2}) == 1);
  CHECK(predicted_class(std::vector<double>{0.1, 0.5, 0.4}) == 2);
  CHECK(predicted_class(std::vector<double>{0.2, 0.8}) == 1);
}

TEST_CASE("probability vectors are checked")
{
  CHECK_NOTHROW(check_probs(std::vector<double>{0.5, 0.5}));
  CHECK_NOTHROW(check_probs(std::vector<double>{0.3, 0.3, 0.4000005}));
  CHECK_THROWS_AS(check_probs(std::vector<double>{0.5, 0.6}), InvalidArgument);
  CHECK_THROWS_AS(check_probs(std::vector<double>{-0.1, 1.1}), InvalidArgument);
  CHECK_THROWS_AS(check_probs(std::vector<double>{1.0}), InvalidArgument);
}

TEST_CASE("COCO thresholds")
{
  const auto t = coco_iou_thresholds();
  REQUIRE(t.size() == 10);
  CHECK(t.front() == 0.5);
  CHECK(t.back() == 0.95);
  CHECK(t[3] == 0.65);
}

TEST_CASE("one perfect detection")
{
  const Dataset gt = scene(1, {rect_annotation(1, 1, 1, 10, 10, 20, 20)});
  const std::vector<Detection> dets{det(1, 1, box(10, 10, 20, 20), {0.9, 0.1})};
  const EvalData data(gt, dets);
  const MatchResult m = match_detections(data, 0.5, false, {});
  REQUIRE(m.ledger.size() == 1);
  CHECK(m.ledger[0].gt_id == 1);
  CHECK(m.ledger[0].iou == 1.0);
  CHECK(m.true_positives() == 1);
  CHECK(m.false_negatives() == 0);
  const EvalReport r = average_precision(data, EvalConfig{});
  CHECK(r.mean_ap == doctest::Approx(100.0));
  CHECK(r.ap_per_threshold.size() == 10);
}

TEST_CASE("no detections give AP 0")
{
  const Dataset gt = scene(1, {rect_annotation(1, 1, 1, 10, 10, 20, 20)});
  const EvalData data(gt, {});
  const EvalReport r = average_precision(data, EvalConfig{});
  CHECK(r.mean_ap == 0.0);
  REQUIRE(r.classes.size() == 1);
  CHECK(r.classes[0].num_ground_truth == 1);
}

TEST_CASE("higher score claims the ground truth")
{
  const Dataset gt = scene(1, {rect_annotation(1, 1, 1, 10, 10, 20, 20)});
  const std::vector<Detection> dets{
    det(1, 1, box(10, 10, 20, 20), {0.6, 0.4}), det(2, 1, box(12, 10, 20, 20), {0.8, 0.2})};
  const MatchResult m = match_detections(EvalData(gt, dets), 0.5, false, {ScoreKind::Class});
  REQUIRE(m.ledger.size() == 2);
  CHECK(m.ledger[0].detection_id == 2);
  CHECK(m.ledger[0].gt_id == 1);
  CHECK_FALSE(m.ledger[1].gt_id);
  CHECK(m.ledger[1].iou == 1.0);
  CHECK(m.false_positives() == 1);
}

TEST_CASE("false positive ranked first halves AP")
{
  const Dataset gt = scene(1, {rect_annotation(1, 1, 1, 10, 10, 20, 20)});
  const std::vector<Detection> dets{
    det(1, 1, box(40, 40, 10, 10), {0.95, 0.05}), det(2, 1, box(10, 10, 20, 20), {0.9, 0.1})};
  const EvalReport r = average_precision(EvalData(gt, dets), single(0.5));
  CHECK(r.mean_ap == doctest::Approx(50.0));
  CHECK(interpolated_ap({false, true}, 1) == doctest::Approx(0.5));
  CHECK(interpolated_ap({true, false}, 1) == doctest::Approx(1.0));
  CHECK(interpolated_ap({true}, 2) == doctest::Approx(51.0 / 101.0));
  CHECK(interpolated_ap({}, 3) == 0.0);
}

TEST_CASE("class-aware matching versus class-agnostic")
{
  const Dataset gt = scene(2, {rect_annotation(1, 1, 1, 10, 10, 20, 20)});
  const std::vector<Detection> dets{det(1, 1, box(10, 10, 20, 20), {0.1, 0.8, 0.1})};
  const EvalData data(gt, dets);
  CHECK(match_detections(data, 0.5, false, {}).true_positives() == 0);
  const MatchResult agnostic = match_detections(data, 0.5, true, {});
  CHECK(agnostic.true_positives() == 1);
  CHECK(agnostic.ledger[0].detection_class == 2);
  CHECK(agnostic.ledger[0].gt_class == 1);
  CHECK(average_precision(data, single(0.5, true)).mean_ap == doctest::Approx(100));
  CHECK(average_precision(data, single(0.5, false)).mean_ap == 0);
}

TEST_CASE("IoU threshold is inclusive")
{
  // 10x10 against its top half: IoU exactly 0.5.
  const Dataset gt = scene(1, {rect_annotation(1, 1, 1, 0, 0, 10, 10)});
  const std::vector<Detection> dets{det(1, 1, box(0, 0, 10, 5), {0.9, 0.1})};
  const EvalData data(gt, dets);
  CHECK(data.iou(0, 0) == 0.5);
  CHECK(match_detections(data, 0.5, false, {}).true_positives() == 1);
  CHECK(match_detections(data, 0.55, false, {}).true_positives() == 0);
}

TEST_CASE("best IoU wins, ties go to the lowest ground-truth id")
{
  const Dataset gt = scene(
    1, {rect_annotation(3, 1, 1, 0, 0, 10, 10), rect_annotation(2, 1, 1, 10, 0, 10, 10),
        rect_annotation(5, 1, 1, 0, 20, 10, 10)});
  // Straddles gts 3 and 2 equally.
  const std::vector<Detection> dets{det(1, 1, box(5, 0, 10, 10), {0.9, 0.1})};
  const MatchResult m = match_detections(EvalData(gt, dets), 0.3, false, {});
  CHECK(m.ledger[0].gt_id == 2);
  CHECK(m.unmatched_gts == std::vector<std::int64_t>{3, 5});
}

TEST_CASE("detections only see ground truth on their own image")
{
  const Dataset gt = scene(1, {rect_annotation(1, 1, 1, 0, 0, 10, 10)});
  const std::vector<Detection> dets{det(1, 2, box(0, 0, 10, 10), {0.9, 0.1})};
  const EvalData data(gt, dets);
  CHECK(data.candidates(0).empty());
  CHECK(match_detections(data, 0.5, true, {}).true_positives() == 0);
}

TEST_CASE("unknown image id is an integrity error")
{
  const Dataset gt = scene(1, {});
  const std::vector<Detection> dets{det(1, 9, box(0, 0, 10, 10), {0.9, 0.1})};
  try {
    EvalData data(gt, dets);
    FAIL("expected IntegrityError");
  } catch (const IntegrityError & e) {
    CHECK(e.id() == 9);
  }
  const std::vector<Detection> bad{det(1, 1, box(0, 0, 10, 10), {0.9, 0.3})};
  CHECK_THROWS_AS(EvalData(gt, bad), InvalidArgument);
}

TEST_CASE("classes without ground truth are excluded from the mean")
{
  const Dataset gt = scene(3, {rect_annotation(1, 1, 1, 0, 0, 10, 10)});
  const std::vector<Detection> dets{
    det(1, 1, box(0, 0, 10, 10), {0.7, 0.1, 0.1, 0.1}), det(2, 1, box(30, 30, 10, 10), {0.1, 0.1, 0.7, 0.1})};
  const EvalReport r = average_precision(EvalData(gt, dets), single(0.5));
  REQUIRE(r.classes.size() == 1);
  CHECK(r.classes[0].class_id == 1);
  CHECK(r.classes[0].name == "c1");
  CHECK(r.mean_ap == doctest::Approx(100));
}

TEST_CASE("AP equals the brute-force oracle on random micro-scenes")
{
  SplitMix64 rng(2024);
  const auto thresholds = coco_iou_thresholds();
  for (int trial = 0; trial < 300; ++trial) {
    const MicroScene s = random_micro_scene(rng);
    const EvalData data(s.ground_truth, s.detections);
    for (const bool agnostic : {false, true}) {
      for (const ScoreKind kind : {ScoreKind::Class, ScoreKind::Litter, ScoreKind::Ratio}) {
        EvalConfig config;
        config.class_agnostic = agnostic;
        config.score.kind = kind;
        std::vector<double> scores;
        for (const auto & d : s.detections) scores.push_back(score(d.probs, config.score));
        const auto expected = oracle_ap(s, thresholds, agnostic, scores);
        const EvalReport r = average_precision(data, config);
        REQUIRE(r.classes.size() == expected.size());
        for (std::size_t c = 0; c < expected.size(); ++c) {
          for (std::size_t t = 0; t < thresholds.size(); ++t) {
            REQUIRE(r.classes[c].ap_per_threshold[t] == expected[c][t]);
          }
        }
      }
    }
  }
}

TEST_CASE("AP depends on score ranks only")
{
  SplitMix64 rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const MicroScene s = random_micro_scene(rng);
    const EvalData data(s.ground_truth, s.detections);
    const EvalConfig config;
    std::vector<double> base, affine, cubed;
    for (const auto & d : s.detections) {
      const double x = score(d.probs, config.score);
      base.push_back(x);
      affine.push_back(2 * x + 1);
      cubed.push_back(x * x * x);
    }
    const EvalReport a = average_precision(data, config, base);
    CHECK(average_precision(data, config, affine).ap_per_threshold == a.ap_per_threshold);
    CHECK(average_precision(data, config, cubed).ap_per_threshold == a.ap_per_threshold);
    CHECK(average_precision(data, config).mean_ap == a.mean_ap);
  }
}

TEST_CASE("matching ignores detection order")
{
  SplitMix64 rng(5);
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 100; ++trial) {
    MicroScene s = random_micro_scene(rng);
    const MatchResult a = match_detections(EvalData(s.ground_truth, s.detections), 0.5, false, {});
    std::shuffle(s.detections.begin(), s.detections.end(), gen);
    std::shuffle(s.ground_truth.annotations.begin(), s.ground_truth.annotations.end(), gen);
    const MatchResult b = match_detections(EvalData(s.ground_truth, s.detections), 0.5, false, {});
    REQUIRE(a.ledger.size() == b.ledger.size());
    for (std::size_t i = 0; i < a.ledger.size(); ++i) {
      CHECK(a.ledger[i].detection_id == b.ledger[i].detection_id);
      CHECK(a.ledger[i].gt_id == b.ledger[i].gt_id);
    }
    CHECK(a.unmatched_gts == b.unmatched_gts);
  }
}

TEST_CASE("single-class heads rank identically under class and litter scores")
{
  SplitMix64 rng(13);
  for (int i = 0; i < 1000; ++i) {
    const double p = rng.uniform();
    const std::vector<double> probs{p, 1 - p};
    CHECK(score(probs, {ScoreKind::Class}) == doctest::Approx(score(probs, {ScoreKind::Litter})).epsilon(1e-12));
  }
}

TEST_CASE("results do not depend on the thread count")
{
  SyntheticSpec spec;
  spec.images = 12;
  const Dataset gt = synthetic_dataset(spec);
  std::vector<Detection> dets;
  SplitMix64 rng(3);
  for (const auto & a : gt.annotations) {
    Detection d;
    d.id = a.id;
    d.image_id = a.image_id;
    const int dx = static_cast<int>(rng.uniform_int(-2, 2));
    d.segmentation = box(static_cast<int>(a.bbox.x) + dx, static_cast<int>(a.bbox.y), static_cast<int>(a.bbox.w),
                         static_cast<int>(a.bbox.h));
    const double p = rng.uniform(0.3, 0.9);
    d.probs = {p / 4, p / 4, p / 4, p / 4, 1 - p};
    dets.push_back(d);
  }
  ::setenv("LITTERKIT_THREADS", "1", 1);
  const auto one = to_json(average_precision(EvalData(gt, dets), EvalConfig{}));
  ::setenv("LITTERKIT_THREADS", "3", 1);
  const auto three = to_json(average_precision(EvalData(gt, dets), EvalConfig{}));
  ::unsetenv("LITTERKIT_THREADS");
  CHECK(one.dump() == three.dump());
}

TEST_CASE("confusion matrix bookkeeping")
{
  const Dataset gt = scene(
    2, {rect_annotation(1, 1, 1, 0, 0, 10, 10), rect_annotation(2, 1, 2, 20, 0, 10, 10),
        rect_annotation(3, 1, 2, 40, 0, 10, 10)});
  const std::vector<Detection> dets{
    det(1, 1, box(0, 0, 10, 10), {0.1, 0.8, 0.1}),    // pred 2 on gt class 1
    det(2, 1, box(20, 0, 10, 10), {0.05, 0.9, 0.05}),  // pred 2 on gt class 2
    det(3, 1, box(0, 40, 10, 10), {0.8, 0.1, 0.1}),    // pred 1, nothing there
    det(4, 1, box(40, 0, 10, 10), {0.05, 0.05, 0.9})};  // below any sensible threshold
  const ConfusionMatrix cm = confusion_matrix(EvalData(gt, dets), 1.0, {ScoreKind::Ratio, 1e-6});
  CHECK(cm.labels == std::vector<std::string>{"BG", "c1", "c2"});
  CHECK(cm.counts[2][1] == 1);
  CHECK(cm.counts[2][2] == 1);
  CHECK(cm.counts[1][0] == 1);
  CHECK(cm.counts[0][2] == 1);
  CHECK(cm.matched == 2);
  CHECK(cm.false_positives == 1);
  CHECK(cm.false_negatives == 1);
  CHECK(cm.total() == 4);

  const auto norm = cm.normalized_by_ground_truth();
  CHECK(norm[2][2] == doctest::Approx(0.5));
  CHECK(norm[0][2] == doctest::Approx(0.5));
  CHECK(norm[1][0] == doctest::Approx(1.0));
  CHECK(cm.to_csv() == "predicted\\ground_truth,BG,c1,c2\r\nBG,0,0,1\r\nc1,1,0,0\r\nc2,0,1,1\r\n");
}

TEST_CASE("detections below the score threshold are not counted")
{
  const Dataset gt = scene(1, {});
  const std::vector<Detection> dets{det(1, 1, box(0, 0, 10, 10), {0.5, 0.5})};
  const ConfusionMatrix cm = confusion_matrix(EvalData(gt, dets), 10.0, {ScoreKind::Ratio});
  CHECK(cm.total() == 0);
}

TEST_CASE("confusion totals reconcile with the ledger on random scenes")
{
  SplitMix64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const MicroScene s = random_micro_scene(rng);
    const EvalData data(s.ground_truth, s.detections);
    const double threshold = rng.uniform(0.0, 3.0);
    const ScoreSpec spec{ScoreKind::Ratio};
    const ConfusionMatrix cm = confusion_matrix(data, threshold, spec);
    const MatchResult m = match_detections(data, 0.5, true, spec, threshold);
    CHECK(cm.matched == m.true_positives());
    CHECK(cm.false_positives == m.false_positives());
    CHECK(cm.false_negatives == m.false_negatives());
    CHECK(cm.total() == cm.matched + cm.false_positives + cm.false_negatives);
    std::size_t first_row = 0, first_col = 0;
    for (std::size_t i = 0; i < cm.counts.size(); ++i) {
      first_row += cm.counts[0][i];
      first_col += cm.counts[i][0];
    }
    CHECK(first_row == cm.false_negatives);
    CHECK(first_col == cm.false_positives);
  }
}

TEST_CASE("scatter tables")
{
  const Dataset gt = scene(1, {rect_annotation(1, 1, 1, 0, 0, 10, 10), rect_annotation(2, 1, 1, 30, 30, 8, 8)});
  const std::vector<Detection> dets{
    det(1, 1, box(0, 0, 10, 10), {0.9, 0.1}), det(2, 2, box(0, 0, 10, 10), {0.6, 0.4})};
  const EvalData data(gt, dets);
  const ScatterTable s = iou_score_scatter(data, EvalConfig{});
  REQUIRE(s.rows.size() == 2);
  CHECK(s.rows[0].y == 1.0);
  CHECK(s.rows[0].x == doctest::Approx(0.9 / (0.1 + 1e-6)));
  CHECK(s.rows[1].y == 0.0);
  CHECK(s.x_label == "ratio_score");

  const ScatterTable a = area_iou_scatter(data);
  REQUIRE(a.rows.size() == 2);
  CHECK(a.rows[0].x == 100);
  CHECK(a.rows[0].y == 1.0);
  CHECK(a.rows[1].x == 64);
  CHECK(a.rows[1].y == 0.0);
  CHECK(a.to_csv().rfind("gt_id,bbox_area,best_iou\r\n1,100,1\r\n", 0) == 0);
}

TEST_CASE("detections file round trip")
{
  const std::vector<Detection> dets{
    det(4, 1, box(0, 0, 10, 10), {0.9, 0.1}), det(7, 2, Rle{2, 2, {1, 2, 1}}, {0.25, 0.75})};
  const auto back = parse_detections(serialize_detections(dets));
  REQUIRE(back.size() == 2);
  CHECK(back[0].id == 4);
  CHECK(back[1].segmentation == dets[1].segmentation);
  CHECK(back[1].probs == dets[1].probs);

  const auto implicit = parse_detections(R"([{"image_id":1,"segmentation":[[0,0,1,0,1,1]],"probs":[1,0]},)"
                                         R"({"image_id":1,"segmentation":[[0,0,1,0,1,1]],"probs":[0,1]}])");
  CHECK(implicit[1].id == 2);
  CHECK_THROWS_AS(parse_detections("{"), ParseError);
  CHECK_THROWS_AS(parse_detections(R"([{"image_id":1}])"), ParseError);
}

TEST_CASE("report JSON carries config, classes and ledger")
{
  const Dataset gt = scene(1, {rect_annotation(1, 1, 1, 0, 0, 10, 10)});
  const std::vector<Detection> dets{det(1, 1, box(0, 0, 10, 10), {0.9, 0.1}), det(2, 1, box(50, 50, 5, 5), {0.2, 0.8})};
  const auto j = to_json(average_precision(EvalData(gt, dets), EvalConfig{}));
  CHECK(j.at("config").at("score") == "ratio");
  CHECK(j.at("config").at("iou_thresholds").size() == 10);
  CHECK(j.at("classes").size() == 1);
  CHECK(j.at("ledger").size() == 2);
  CHECK(j.at("ledger")[1].at("gt_id").is_null());
  CHECK(j.at("mean_ap").get<double>() == doctest::Approx(100));
}

TEST_CASE("config validation")
{
  const EvalData data(scene(1, {}), {});
  EvalConfig c;
  c.iou_thresholds = {0.5, 0.5};
  CHECK_THROWS_AS(average_precision(data, c), InvalidArgument);
  c.iou_thresholds = {0.0};
  CHECK_THROWS_AS(average_precision(data, c), InvalidArgument);
  c.iou_thresholds = {};
  CHECK_THROWS_AS(average_precision(data, c), InvalidArgument);
  c.iou_thresholds = {0.5, 1.0};
  CHECK_NOTHROW(average_precision(data, c));
}

TEST_CASE("cross-validation summary")
{
  const ApTable a{{"TACO_1"}, {"Class score"}, {{10.0}}};
  const ApTable b{{"TACO_1"}, {"Class score"}, {{20.0}}};
  const std::vector<ApTable> folds{a, b};
  const SummaryTable s = cross_validation_summary(folds);
  CHECK(s.mean[0][0] == 15.0);
  CHECK(s.stddev[0][0] == doctest::Approx(7.0710678).epsilon(1e-6));
  CHECK(s.format() == "Dataset,Class score\nTACO_1,15.0 ± 7.1\n");

  const std::vector<ApTable> same{a, a, a};
  CHECK(cross_validation_summary(same).stddev[0][0] == 0.0);

  const std::vector<ApTable> one{a};
  CHECK_THROWS_AS(cross_validation_summary(one), InvalidArgument);
  const ApTable wide{{"TACO_1"}, {"Class score", "Litter score"}, {{1.0, 2.0}}};
  const std::vector<ApTable> mismatch{a, wide};
  CHECK_THROWS_AS(cross_validation_summary(mismatch), InvalidArgument);
}
