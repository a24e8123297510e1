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

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "litterkit/cli.hpp"
#include "litterkit/dataset.hpp"
#include "litterkit/evaluator.hpp"
#include "litterkit/taxonomy.hpp"

using namespace litterkit;
using namespace litterkit::testing;
namespace fs = std::filesystem;

namespace
{

struct RunResult
{
  int code = -1;
  std::string out;
  std::string err;
};

// Runs the installed binary with stdout and stderr captured to files.
RunResult run_binary(const TempDir & tmp, const std::string & args)
{
  const fs::path out = tmp / "stdout.txt";
  const fs::path err = tmp / "stderr.txt";
  const std::string cmd =
    std::string("\"") + LITTERKIT_CLI + "\" " + args + " >\"" + out.string() + "\" 2>\"" + err.string() + "\"";
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = read_file(out);
  r.err = read_file(err);
  return r;
}

RunResult run_inproc(const std::vector<std::string> & args)
{
  std::ostringstream out, err;
  RunResult r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

void write_text(const fs::path & p, const std::string & text)
{
  std::ofstream f(p, std::ios::binary);
  f << text;
}

std::string q(const fs::path & p)
{
  return "\"" + p.string() + "\"";
}

// Perfect detections for every ground-truth object under the top-k taxonomy.
std::vector<Detection> perfect_detections(const Dataset & d, int top_k)
{
  const Dataset task = remap(d, build_top_k_mapping(d, top_k));
  const std::size_t n = task.categories.size();
  std::vector<Detection> dets;
  for (const auto & a : task.annotations) {
    Detection det;
    det.id = a.id;
    det.image_id = a.image_id;
    det.segmentation = a.segmentation;
    det.probs.assign(n + 1, 0.0);
    det.probs[static_cast<std::size_t>(a.category_id - 1)] = 0.75;
    det.probs[n] = 0.25;
    dets.push_back(det);
  }
  return dets;
}

}  // namespace

TEST_CASE("validate on a clean file")
{
  TempDir tmp("cli");
  const RunResult r = run_binary(tmp, "validate --dataset " + q(data_dir() / "mini.json"));
  CHECK(r.code == 0);
  CHECK(r.out == "0 violations\n");
}

TEST_CASE("validate reports violations with exit 1")
{
  TempDir tmp("cli");
  Dataset d = mini_dataset();
  d.annotations[0].area = 400;
  write_text(tmp / "area.json", serialize_dataset(d));
  RunResult r = run_binary(tmp, "validate --dataset " + q(tmp / "area.json"));
  CHECK(r.code == 1);
  CHECK(r.out == "1 violations\n");
  CHECK(!r.err.empty());

  d = mini_dataset();
  d.annotations[0].image_id = 42;
  write_text(tmp / "dangling.json", serialize_dataset(d));
  r = run_binary(tmp, "validate --dataset " + q(tmp / "dangling.json"));
  CHECK(r.code == 1);
  CHECK(r.err.find("42") != std::string::npos);
}

TEST_CASE("usage errors exit 2")
{
  TempDir tmp("cli");
  CHECK(run_binary(tmp, "frobnicate").code == 2);
  CHECK(run_binary(tmp, "").code == 2);
  CHECK(run_binary(tmp, "validate").code == 2);
  CHECK(run_binary(tmp, "split --dataset x --out y --k 0").code == 2);
  CHECK(run_inproc({"remap", "--dataset", "x", "--out", "y", "--classless", "--top-k", "3"}).code == 2);
  CHECK(run_binary(tmp, "--help").code == 0);
}

TEST_CASE("missing input is a data error")
{
  TempDir tmp("cli");
  const RunResult r = run_binary(tmp, "validate --dataset " + q(tmp / "absent.json"));
  CHECK(r.code == 1);
  CHECK(r.err.rfind("error:", 0) == 0);
}

TEST_CASE("split is reproducible for a given seed")
{
  TempDir tmp("cli");
  SyntheticSpec spec;
  spec.images = 40;
  write_text(tmp / "d.json", serialize_dataset(synthetic_dataset(spec)));
  const std::string base = "--seed 7 split --k 4 --dataset " + q(tmp / "d.json") + " --out ";
  REQUIRE(run_binary(tmp, base + q(tmp / "a")).code == 0);
  REQUIRE(run_binary(tmp, base + q(tmp / "b") + " --write-subsets").code == 0);
  for (int i = 0; i < 4; ++i) {
    const std::string name = "fold_" + std::to_string(i) + ".txt";
    REQUIRE(fs::exists(tmp / "a" / name));
    CHECK(read_file(tmp / "a" / name) == read_file(tmp / "b" / name));
  }
  REQUIRE(run_binary(tmp, "--seed 8 split --k 4 --dataset " + q(tmp / "d.json") + " --out " + q(tmp / "c")).code == 0);
  bool differs = false;
  for (int i = 0; i < 4; ++i) {
    const std::string name = "fold_" + std::to_string(i) + ".txt";
    differs = differs || read_file(tmp / "a" / name) != read_file(tmp / "c" / name);
  }
  CHECK(differs);
}

TEST_CASE("stats writes every table")
{
  TempDir tmp("cli");
  const RunResult r = run_inproc({"stats", "--dataset", (data_dir() / "mini.json").string(), "--out", (tmp / "s").string(),
                                 "--top-k", "3"});
  REQUIRE(r.code == 0);
  for (const char * name : {"categories.csv", "supercategories.csv", "resolutions.csv", "scene_tags.csv", "bbox_sizes.csv"}) {
    CHECK(fs::exists(tmp / "s" / name));
  }
}

TEST_CASE("remap round trip through an exported mapping")
{
  TempDir tmp("cli");
  SyntheticSpec spec;
  write_text(tmp / "d.json", serialize_dataset(synthetic_dataset(spec)));
  REQUIRE(run_inproc({"remap", "--dataset", (tmp / "d.json").string(), "--out", (tmp / "a.json").string(), "--top-k",
                      "2", "--export-mapping", (tmp / "m.tsv").string()})
            .code == 0);
  REQUIRE(run_inproc({"remap", "--dataset", (tmp / "d.json").string(), "--out", (tmp / "b.json").string(), "--mapping",
                      (tmp / "m.tsv").string()})
            .code == 0);
  CHECK(load_dataset(tmp / "a.json") == load_dataset(tmp / "b.json"));
  CHECK(load_dataset(tmp / "a.json").categories.size() == 3);

  REQUIRE(run_inproc({"remap", "--dataset", (tmp / "d.json").string(), "--out", (tmp / "c.json").string(), "--classless"})
            .code == 0);
  CHECK(load_dataset(tmp / "c.json").categories.size() == 1);
}

TEST_CASE("transplant and augment produce valid datasets")
{
  TempDir tmp("cli");
  SyntheticSpec spec;
  spec.images = 6;
  const Dataset d = synthetic_dataset(spec);
  write_text(tmp / "d.json", serialize_dataset(d));
  write_images(d, tmp / "img");
  fs::create_directories(tmp / "targets");
  for (int i = 0; i < 3; ++i) {
    write_png(synthetic_image(80, 60, 500 + i), tmp / "targets" / ("t" + std::to_string(i) + ".png"));
  }
  RunResult r = run_binary(tmp, "--seed 3 transplant --dataset " + q(tmp / "d.json") + " --image-root " +
                                  q(tmp / "img") + " --targets " + q(tmp / "targets") + " --out " + q(tmp / "tp") +
                                  " --count 5");
  REQUIRE(r.code == 0);
  const Dataset tp = load_dataset(tmp / "tp" / "annotations.json");
  CHECK(validate(tp).ok());
  CHECK(tp.images.size() + (r.err.empty() ? 0 : 1) >= 1);
  for (const auto & im : tp.images) CHECK(fs::exists(tmp / "tp" / im.file_name));

  r = run_binary(tmp, "--seed 3 augment --dataset " + q(tmp / "d.json") + " --image-root " + q(tmp / "img") +
                        " --out " + q(tmp / "aug") + " --ops blur,noise,exposure,rotate,crop --crop 32x32");
  REQUIRE(r.code == 0);
  const Dataset aug = load_dataset(tmp / "aug" / "annotations.json");
  CHECK(validate(aug).ok());
  REQUIRE(aug.images.size() == d.images.size());
  CHECK(aug.images[0].width == 32);
  CHECK(read_image(tmp / "aug" / aug.images[0].file_name).height == 32);
}

TEST_CASE("evaluate writes reports and summarize reduces them")
{
  TempDir tmp("cli");
  SyntheticSpec spec;
  spec.images = 10;
  const Dataset d = synthetic_dataset(spec);
  write_text(tmp / "d.json", serialize_dataset(d));
  write_text(tmp / "dets.json", serialize_detections(perfect_detections(d, 3)));

  std::vector<std::string> reports;
  for (const int fold : {0, 1}) {
    for (const char * task : {"taco1", "taco10"}) {
      const fs::path out = tmp / ("f" + std::to_string(fold) + task);
      const RunResult r = run_inproc({"evaluate", "--dataset", (tmp / "d.json").string(), "--dets",
                                      (tmp / "dets.json").string(), "--task", task, "--top-k", "3", "--fold", std::to_string(fold),
                                      "--out", out.string()});
      REQUIRE(r.code == 0);
      CHECK(r.out.find("AP 100.0") != std::string::npos);
      for (const char * kind : {"class", "litter", "ratio"}) {
        reports.push_back((out / (std::string("report_") + kind + ".json")).string());
        CHECK(fs::exists(reports.back()));
        CHECK(fs::exists(out / (std::string("iou_score_") + kind + ".csv")));
      }
      CHECK(fs::exists(out / "area_iou.csv"));
      CHECK(fs::exists(out / "confusion_ratio10.csv"));
      CHECK(fs::exists(out / "confusion_ratio50_normalized.csv"));
    }
  }
  std::vector<std::string> args{"evaluate", "--out", (tmp / "summary.csv").string(), "--summarize"};
  args.insert(args.end(), reports.begin(), reports.end());
  const RunResult s = run_inproc(args);
  REQUIRE(s.code == 0);
  const std::string expected = "Dataset,Class score,Litter score,Ratio score\n"
                               "TACO_1,100.0 ± 0.0,100.0 ± 0.0,100.0 ± 0.0\n"
                               "TACO_10,100.0 ± 0.0,100.0 ± 0.0,100.0 ± 0.0\n";
  CHECK(s.out == expected);
  CHECK(read_file(tmp / "summary.csv") == expected);
}

TEST_CASE("evaluate names an unknown image id")
{
  TempDir tmp("cli");
  SyntheticSpec spec;
  spec.images = 4;
  const Dataset d = synthetic_dataset(spec);
  auto dets = perfect_detections(d, 3);
  REQUIRE(!dets.empty());
  dets[0].image_id = 31337;
  write_text(tmp / "d.json", serialize_dataset(d));
  write_text(tmp / "dets.json", serialize_detections(dets));
  const RunResult r = run_binary(tmp, "evaluate --dataset " + q(tmp / "d.json") + " --dets " + q(tmp / "dets.json") +
                                        " --task taco10 --top-k 3 --out " + q(tmp / "e"));
  CHECK(r.code == 1);
  CHECK(r.err.find("31337") != std::string::npos);
}

TEST_CASE("evaluate rejects probability vectors of the wrong length")
{
  TempDir tmp("cli");
  SyntheticSpec spec;
  spec.images = 4;
  const Dataset d = synthetic_dataset(spec);
  auto dets = perfect_detections(d, 3);
  for (auto & det : dets) det.probs = {0.5, 0.5};
  write_text(tmp / "d.json", serialize_dataset(d));
  write_text(tmp / "dets.json", serialize_detections(dets));
  const RunResult r = run_inproc({"evaluate", "--dataset", (tmp / "d.json").string(), "--dets",
                                  (tmp / "dets.json").string(), "--task", "taco10", "--top-k", "3", "--out", (tmp / "e").string()});
  CHECK(r.code == 1);
}
