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

#include "litterkit/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "litterkit/augment.hpp"
#include "litterkit/dataset.hpp"
#include "litterkit/error.hpp"
#include "litterkit/evaluator.hpp"
#include "litterkit/image.hpp"
#include "litterkit/rng.hpp"
#include "litterkit/splitter.hpp"
#include "litterkit/stats.hpp"
#include "litterkit/taxonomy.hpp"
#include "litterkit/transplant.hpp"
#include "litterkit/transplant_service.hpp"

namespace litterkit::cli
{

namespace fs = std::filesystem;
using nlohmann::json;

namespace
{

// A data problem found by the CLI itself (exit 1).
class DataViolation : public Error
{
public:
  using Error::Error;
};

std::string read_text(const fs::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot read " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path & path, const std::string & text)
{
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("cannot write " + path.string());
  }
  out << text;
}

ImageLoader loader_for(const fs::path & root)
{
  return [root](const ImageRecord & rec) { return read_image(root / rec.file_name); };
}

std::vector<double> parse_reals(const std::string & text)
{
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) {
        throw std::invalid_argument(item);
      }
    } catch (const std::exception &) {
      throw CLI::ValidationError("'" + item + "' is not a number");
    }
  }
  return out;
}

struct Globals
{
  std::uint64_t seed = 0;
};

// validate

struct ValidateArgs
{
  fs::path dataset;
};

int do_validate(const ValidateArgs & a, std::ostream & out, std::ostream & err)
{
  const ValidationReport report = validate(load_dataset(a.dataset));
  for (const auto & v : report.violations) {
    err << v.entity << ' ' << v.id << ' ' << v.rule << ": " << v.detail << '\n';
  }
  out << report.violations.size() << " violations\n";
  return report.ok() ? kExitOk : kExitDataViolation;
}

// stats

struct StatsArgs
{
  fs::path dataset;
  fs::path out;
  int top_k = 9;
  fs::path mapping;
};

int do_stats(const StatsArgs & a, std::ostream & out, std::ostream &)
{
  const Dataset d = load_dataset(a.dataset);
  const TaxonomyMapping m =
    a.mapping.empty() ? build_top_k_mapping(d, a.top_k) : import_mapping(d, read_text(a.mapping));
  const std::map<std::string, HistogramTable> tables{
    {"categories.csv", category_counts(d, CategoryLevel::Category)},
    {"supercategories.csv", category_counts(d, CategoryLevel::Supercategory)},
    {"resolutions.csv", resolution_distribution(d)},
    {"scene_tags.csv", scene_tag_proportions(d)},
    {"bbox_sizes.csv", bbox_size_histogram(d, m)},
  };
  for (const auto & [name, table] : tables) {
    write_text(a.out / name, table.to_csv());
    out << (a.out / name).string() << '\n';
  }
  return kExitOk;
}

// remap

struct RemapArgs
{
  fs::path dataset;
  fs::path out;
  std::optional<int> top_k;
  std::string other = std::string(kOtherLitter);
  bool classless = false;
  fs::path mapping;
  fs::path export_mapping;
};

int do_remap(const RemapArgs & a, std::ostream & out, std::ostream &)
{
  const Dataset d = load_dataset(a.dataset);
  TaxonomyMapping m;
  if (a.top_k) {
    m = build_top_k_mapping(d, *a.top_k, a.other);
  } else if (a.classless) {
    m = classless_mapping(d);
  } else {
    m = import_mapping(d, read_text(a.mapping));
  }
  save_dataset(remap(d, m), a.out);
  if (!a.export_mapping.empty()) {
    write_text(a.export_mapping, export_mapping(d, m));
  }
  for (std::size_t i = 0; i < m.target_classes.size(); ++i) {
    out << i + 1 << '\t' << m.target_classes[i] << '\n';
  }
  return kExitOk;
}

// split

struct SplitArgs
{
  fs::path dataset;
  fs::path out;
  int k = 4;
  std::string fractions = "0.8,0.1,0.1";
  bool write_subsets = false;
};

int do_split(const SplitArgs & a, const Globals & g, std::ostream & out, std::ostream &)
{
  const std::vector<double> f = parse_reals(a.fractions);
  if (f.size() != 3) {
    throw CLI::ValidationError("--fractions needs three values: train,val,test");
  }
  const Dataset d = load_dataset(a.dataset);
  for (const Split & s : kfold_splits(d, a.k, {f[0], f[1], f[2]}, g.seed)) {
    const std::string stem = "fold_" + std::to_string(s.fold_index);
    write_text(a.out / (stem + ".txt"), format_split(s));
    if (a.write_subsets) {
      save_dataset(subset(d, s.train), a.out / (stem + "_train.json"));
      save_dataset(subset(d, s.val), a.out / (stem + "_val.json"));
      save_dataset(subset(d, s.test), a.out / (stem + "_test.json"));
    }
    out << stem << ' ' << s.train.size() << ' ' << s.val.size() << ' ' << s.test.size() << '\n';
  }
  return kExitOk;
}

// transplant

struct TransplantArgs
{
  fs::path dataset;
  fs::path image_root;
  fs::path targets;
  fs::path out;
  std::size_t count = 0;
  TransplantPolicy policy;
  bool hard = false;
};

std::vector<TargetImage> load_targets(const fs::path & dir)
{
  std::vector<fs::path> files;
  for (const auto & entry : fs::directory_iterator(dir)) {
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (entry.is_regular_file() && (ext == ".png" || ext == ".jpg" || ext == ".jpeg")) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    throw Error("no target images in " + dir.string());
  }
  std::vector<TargetImage> targets;
  for (const auto & f : files) {
    targets.push_back({f.filename().string(), read_image(f)});
  }
  return targets;
}

int do_transplant(const TransplantArgs & a, const Globals & g, std::ostream & out, std::ostream & err)
{
  const Dataset d = load_dataset(a.dataset);
  const std::vector<TargetImage> targets = load_targets(a.targets);
  TransplantPolicy policy = a.policy;
  policy.soft = !a.hard;
  const TransplantBatch batch = transplant_batch(d, loader_for(a.image_root), targets, a.count, g.seed, policy);
  for (const auto & w : batch.warnings) {
    err << "warning: " << w << '\n';
  }
  fs::create_directories(a.out);
  for (std::size_t i = 0; i < batch.images.size(); ++i) {
    write_png(batch.images[i], a.out / batch.dataset.images[i].file_name);
  }
  save_dataset(batch.dataset, a.out / "annotations.json");
  out << batch.dataset.annotations.size() << " transplants\n";
  return kExitOk;
}

// augment

struct AugmentArgs
{
  fs::path dataset;
  fs::path image_root;
  fs::path out;
  std::string ops = "blur,noise,exposure,rotate,crop";
  double max_sigma = 2.0;
  double max_noise = 10.0;
  double min_gain = 0.7;
  double max_gain = 1.3;
  double max_bias = 25.0;
  double max_rotation = 45.0;
  std::string crop = "1024x1024";
};

CropSize parse_crop(const std::string & text)
{
  const auto x = text.find('x');
  try {
    if (x != std::string::npos) {
      return {std::stoi(text.substr(0, x)), std::stoi(text.substr(x + 1))};
    }
  } catch (const std::exception &) {
  }
  throw CLI::ValidationError("--crop expects WIDTHxHEIGHT, got '" + text + "'");
}

int do_augment(const AugmentArgs & a, const Globals & g, std::ostream & out, std::ostream & err)
{
  std::vector<std::string> ops;
  {
    std::stringstream ss(a.ops);
    std::string op;
    while (std::getline(ss, op, ',')) {
      static const std::vector<std::string> known{"blur", "noise", "exposure", "rotate", "crop"};
      if (std::find(known.begin(), known.end(), op) == known.end()) {
        throw CLI::ValidationError("unknown augmentation '" + op + "'");
      }
      ops.push_back(op);
    }
  }
  const CropSize crop_size = parse_crop(a.crop);

  const Dataset d = load_dataset(a.dataset);
  std::vector<ImageRecord> records = d.images;
  std::sort(records.begin(), records.end(), [](const auto & l, const auto & r) { return l.id < r.id; });
  const DatasetIndex index(d);

  Dataset result = d;
  result.images.clear();
  result.annotations.clear();
  fs::create_directories(a.out);

  for (std::size_t i = 0; i < records.size(); ++i) {
    const ImageRecord & rec = records[i];
    SplitMix64 rng = SplitMix64::stream(g.seed, i);
    AnnotatedImage cur{read_image(a.image_root / rec.file_name), {}};
    for (const Annotation * ann : index.annotations_of(rec.id)) {
      cur.annotations.push_back(*ann);
    }
    for (const auto & op : ops) {
      if (op == "blur") {
        cur.image = gaussian_blur(cur.image, rng.uniform(0.0, a.max_sigma));
      } else if (op == "noise") {
        const double stddev = rng.uniform(0.0, a.max_noise);
        cur.image = awgn(cur.image, stddev, rng.next());
      } else if (op == "exposure") {
        const double gain = rng.uniform(a.min_gain, a.max_gain);
        cur.image = exposure_contrast(cur.image, gain, rng.uniform(-a.max_bias, a.max_bias));
      } else if (op == "rotate") {
        cur = rotate_with_annotations(cur, rng.uniform(-a.max_rotation, a.max_rotation));
      } else if (op == "crop") {
        const std::uint64_t crop_seed = rng.next();
        if (cur.annotations.empty()) {
          err << "warning: image " << rec.id << " has no annotations, crop skipped\n";
        } else {
          cur = crop_around_bbox(cur, crop_size, crop_seed);
        }
      }
    }
    ImageRecord out_rec = rec;
    out_rec.file_name = fs::path(rec.file_name).stem().string() + "_aug.png";
    out_rec.width = cur.image.width;
    out_rec.height = cur.image.height;
    write_png(cur.image, a.out / out_rec.file_name);
    result.images.push_back(out_rec);
    for (auto & ann : cur.annotations) {
      result.annotations.push_back(std::move(ann));
    }
  }
  save_dataset(result, a.out / "annotations.json");
  out << result.images.size() << " images, " << result.annotations.size() << " annotations\n";
  return kExitOk;
}

// evaluate

struct EvaluateArgs
{
  fs::path dataset;
  fs::path dets;
  std::string task = "taco10";
  std::string score = "all";
  double eps = kDefaultEpsilon;
  fs::path out;
  fs::path mapping;
  int top_k = 9;
  int fold = 0;
  std::vector<fs::path> summarize;
};

std::string task_label(const std::string & task)
{
  return task == "taco1" ? "TACO_1" : "TACO_10";
}

std::string column_label(ScoreKind kind)
{
  switch (kind) {
    case ScoreKind::Class:
      return "Class score";
    case ScoreKind::Litter:
      return "Litter score";
    case ScoreKind::Ratio:
      return "Ratio score";
  }
  return {};
}

int do_summarize(const EvaluateArgs & a, std::ostream & out)
{
  // fold -> task -> column -> AP
  std::map<int, std::map<std::string, std::map<std::string, double>>> cells;
  std::vector<std::string> rows;
  std::vector<std::string> columns;
  for (const auto & path : a.summarize) {
    const json r = json::parse(read_text(path));
    const std::string task = r.at("task").get<std::string>();
    const std::string column = column_label(parse_score_kind(r.at("config").at("score").get<std::string>()));
    cells[r.at("fold").get<int>()][task][column] = r.at("mean_ap").get<double>();
    if (std::find(rows.begin(), rows.end(), task) == rows.end()) rows.push_back(task);
    if (std::find(columns.begin(), columns.end(), column) == columns.end()) columns.push_back(column);
  }
  std::sort(rows.begin(), rows.end());
  std::vector<std::string> ordered;
  for (const ScoreKind k : {ScoreKind::Class, ScoreKind::Litter, ScoreKind::Ratio}) {
    if (std::find(columns.begin(), columns.end(), column_label(k)) != columns.end()) {
      ordered.push_back(column_label(k));
    }
  }

  std::vector<ApTable> folds;
  for (const auto & [fold, tasks] : cells) {
    ApTable t{rows, ordered, {}};
    for (const auto & row : rows) {
      std::vector<double> values;
      for (const auto & col : ordered) {
        const auto task = tasks.find(row);
        if (task == tasks.end() || !task->second.count(col)) {
          throw DataViolation("fold " + std::to_string(fold) + " lacks " + row + " / " + col);
        }
        values.push_back(task->second.at(col));
      }
      t.values.push_back(std::move(values));
    }
    folds.push_back(std::move(t));
  }
  const std::string table = cross_validation_summary(folds).format();
  if (!a.out.empty()) {
    write_text(a.out, table);
  }
  out << table;
  return kExitOk;
}

int do_evaluate(const EvaluateArgs & a, std::ostream & out, std::ostream &)
{
  if (!a.summarize.empty()) {
    return do_summarize(a, out);
  }
  if (a.dataset.empty() || a.dets.empty() || a.out.empty()) {
    throw CLI::ValidationError("evaluate needs --dataset, --dets and --out (or --summarize)");
  }
  const Dataset raw = load_dataset(a.dataset);
  const std::vector<Detection> dets = parse_detections(read_text(a.dets));

  // Detections always come from the multi-class head; TACO-1 scores them
  // class-agnostically against the same class ids.
  const TaxonomyMapping m =
    a.mapping.empty() ? build_top_k_mapping(raw, a.top_k) : import_mapping(raw, read_text(a.mapping));
  const Dataset gt = remap(raw, m);
  const std::size_t expected = m.target_classes.size() + 1;
  for (const auto & det : dets) {
    if (det.probs.size() != expected) {
      throw DataViolation(
        "detection " + std::to_string(det.id) + " has " + std::to_string(det.probs.size()) +
        " probabilities, expected " + std::to_string(expected));
    }
  }
  const EvalData data(gt, dets);

  std::vector<ScoreKind> kinds;
  if (a.score == "all") {
    kinds = {ScoreKind::Class, ScoreKind::Litter, ScoreKind::Ratio};
  } else {
    kinds = {parse_score_kind(a.score)};
  }

  fs::create_directories(a.out);
  EvalConfig config;
  config.class_agnostic = a.task == "taco1";
  for (const ScoreKind kind : kinds) {
    config.score = {kind, a.eps};
    const EvalReport report = average_precision(data, config);
    json j = to_json(report);
    j["task"] = task_label(a.task);
    j["fold"] = a.fold;
    const std::string name(score_kind_name(kind));
    write_text(a.out / ("report_" + name + ".json"), j.dump(2) + "\n");
    write_text(a.out / ("iou_score_" + name + ".csv"), iou_score_scatter(data, config).to_csv());
    char line[128];
    std::snprintf(line, sizeof(line), "%s %s AP %.1f\n", task_label(a.task).c_str(), name.c_str(), report.mean_ap);
    out << line;
  }
  write_text(a.out / "area_iou.csv", area_iou_scatter(data).to_csv());
  for (const double threshold : {10.0, 50.0}) {
    const ConfusionMatrix cm = confusion_matrix(data, threshold, {ScoreKind::Ratio, a.eps});
    const std::string stem = "confusion_ratio" + std::to_string(static_cast<int>(threshold));
    write_text(a.out / (stem + ".csv"), cm.to_csv());
    write_text(a.out / (stem + "_normalized.csv"), cm.to_csv(true));
  }
  return kExitOk;
}

// serve

struct ServeArgs
{
  fs::path dataset;
  fs::path image_root;
  fs::path out;
  std::string host = "127.0.0.1";
  int port = 8080;
  int top_k = 9;
};

std::atomic<bool> g_stop{false};

extern "C" void on_signal(int)
{
  g_stop = true;
}

int do_serve(const ServeArgs & a, std::ostream & out, std::ostream &)
{
  Dataset d = load_dataset(a.dataset);
  ServiceOptions options;
  options.export_dir = a.out;
  if (a.top_k > 0) {
    options.mapping = build_top_k_mapping(d, a.top_k);
  }
  TransplantService service(std::move(d), loader_for(a.image_root), options);
  TransplantServer server(service);
  const int port = server.start(a.host, a.port);
  out << "listening on http://" << a.host << ':' << port << std::endl;

  g_stop = false;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  while (!g_stop) {
    std::this_thread::sleep_for(std::chrono::milliseconds(100));
  }
  server.stop();
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string> & args, std::ostream & out, std::ostream & err)
{
  CLI::App app{"Litter dataset tooling and instance-segmentation evaluation", "litterkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals globals;
  app.add_option("--seed", globals.seed, "Seed for every stochastic operation")->capture_default_str();

  ValidateArgs va;
  auto * validate_cmd = app.add_subcommand("validate", "Check ids, references and geometry");
  validate_cmd->add_option("--dataset", va.dataset, "Annotation file")->required();

  StatsArgs sa;
  auto * stats_cmd = app.add_subcommand("stats", "Write dataset statistics as CSV tables");
  stats_cmd->add_option("--dataset", sa.dataset, "Annotation file")->required();
  stats_cmd->add_option("--out", sa.out, "Output directory")->required();
  stats_cmd->add_option("--top-k", sa.top_k, "Classes kept for the bbox-size table")
    ->check(CLI::PositiveNumber)
    ->capture_default_str();
  stats_cmd->add_option("--mapping", sa.mapping, "Mapping file for the bbox-size table");

  RemapArgs ra;
  auto * remap_cmd = app.add_subcommand("remap", "Rewrite categories into a task taxonomy");
  remap_cmd->add_option("--dataset", ra.dataset, "Annotation file")->required();
  remap_cmd->add_option("--out", ra.out, "Remapped annotation file")->required();
  auto * top_k = remap_cmd->add_option("--top-k", ra.top_k, "Keep the K largest supercategories")
                   ->check(CLI::PositiveNumber);
  remap_cmd->add_option("--other", ra.other, "Name of the catch-all class")->capture_default_str()->needs(top_k);
  auto * classless = remap_cmd->add_flag("--classless", ra.classless, "Map everything to one class");
  auto * mapping = remap_cmd->add_option("--mapping", ra.mapping, "Mapping file to apply");
  remap_cmd->add_option("--export-mapping", ra.export_mapping, "Also write the mapping used");
  top_k->excludes(classless)->excludes(mapping);
  classless->excludes(mapping);

  SplitArgs spa;
  auto * split_cmd = app.add_subcommand("split", "Seeded k-fold train/val/test splits");
  split_cmd->add_option("--dataset", spa.dataset, "Annotation file")->required();
  split_cmd->add_option("--out", spa.out, "Output directory")->required();
  split_cmd->add_option("--k", spa.k, "Number of folds")->check(CLI::PositiveNumber)->capture_default_str();
  split_cmd->add_option("--fractions", spa.fractions, "train,val,test")->capture_default_str();
  split_cmd->add_flag("--write-subsets", spa.write_subsets, "Also write per-part annotation files");

  TransplantArgs ta;
  auto * transplant_cmd = app.add_subcommand("transplant", "Paste annotated objects into target images");
  transplant_cmd->add_option("--dataset", ta.dataset, "Source annotation file")->required();
  transplant_cmd->add_option("--image-root", ta.image_root, "Directory of source images")->required();
  transplant_cmd->add_option("--targets", ta.targets, "Directory of target images")->required();
  transplant_cmd->add_option("--out", ta.out, "Output directory")->required();
  transplant_cmd->add_option("--count", ta.count, "Number of transplants")->required();
  transplant_cmd->add_option("--min-scale", ta.policy.min_scale)->check(CLI::PositiveNumber)->capture_default_str();
  transplant_cmd->add_option("--max-scale", ta.policy.max_scale)->check(CLI::PositiveNumber)->capture_default_str();
  transplant_cmd->add_option("--max-rotation", ta.policy.max_rotation, "Degrees")->capture_default_str();
  transplant_cmd->add_option("--radius", ta.policy.radius, "Soft-mask radius")
    ->check(CLI::PositiveNumber)
    ->capture_default_str();
  transplant_cmd->add_option("--max-retries", ta.policy.max_retries)->check(CLI::NonNegativeNumber)->capture_default_str();
  transplant_cmd->add_flag("--hard", ta.hard, "Paste with the binary mask");

  AugmentArgs aa;
  auto * augment_cmd = app.add_subcommand("augment", "Photometric and geometric augmentation");
  augment_cmd->add_option("--dataset", aa.dataset, "Annotation file")->required();
  augment_cmd->add_option("--image-root", aa.image_root, "Directory of images")->required();
  augment_cmd->add_option("--out", aa.out, "Output directory")->required();
  augment_cmd->add_option("--ops", aa.ops, "Comma-separated: blur,noise,exposure,rotate,crop")->capture_default_str();
  augment_cmd->add_option("--max-sigma", aa.max_sigma)->check(CLI::NonNegativeNumber)->capture_default_str();
  augment_cmd->add_option("--max-noise", aa.max_noise)->check(CLI::NonNegativeNumber)->capture_default_str();
  augment_cmd->add_option("--min-gain", aa.min_gain)->check(CLI::PositiveNumber)->capture_default_str();
  augment_cmd->add_option("--max-gain", aa.max_gain)->check(CLI::PositiveNumber)->capture_default_str();
  augment_cmd->add_option("--max-bias", aa.max_bias)->check(CLI::NonNegativeNumber)->capture_default_str();
  augment_cmd->add_option("--max-rotation", aa.max_rotation, "Degrees")->capture_default_str();
  augment_cmd->add_option("--crop", aa.crop, "Crop window WIDTHxHEIGHT")->capture_default_str();

  EvaluateArgs ea;
  auto * evaluate_cmd = app.add_subcommand("evaluate", "Mask AP, confusion matrices and scatter tables");
  evaluate_cmd->add_option("--dataset", ea.dataset, "Ground-truth annotation file (source taxonomy)");
  evaluate_cmd->add_option("--dets", ea.dets, "Detections file");
  evaluate_cmd->add_option("--task", ea.task, "taco1 or taco10")
    ->check(CLI::IsMember({"taco1", "taco10"}))
    ->capture_default_str();
  evaluate_cmd->add_option("--score", ea.score, "class, litter, ratio or all")
    ->check(CLI::IsMember({"class", "litter", "ratio", "all"}))
    ->capture_default_str();
  evaluate_cmd->add_option("--eps", ea.eps, "Ratio-score epsilon")->check(CLI::PositiveNumber)->capture_default_str();
  evaluate_cmd->add_option("--top-k", ea.top_k, "Task classes before Other Litter")
    ->check(CLI::PositiveNumber)
    ->capture_default_str();
  evaluate_cmd->add_option("--mapping", ea.mapping, "Class mapping file (overrides --top-k)");
  evaluate_cmd->add_option("--fold", ea.fold, "Fold index recorded in the reports")->capture_default_str();
  evaluate_cmd->add_option("--out", ea.out, "Output directory, or summary file with --summarize");
  evaluate_cmd->add_option("--summarize", ea.summarize, "Report files to reduce into a mean ± std table");

  ServeArgs sva;
  auto * serve_cmd = app.add_subcommand("serve", "HTTP service for interactive transplanting");
  serve_cmd->add_option("--dataset", sva.dataset, "Annotation file")->required();
  serve_cmd->add_option("--image-root", sva.image_root, "Directory of images")->required();
  serve_cmd->add_option("--out", sva.out, "Export directory");
  serve_cmd->add_option("--host", sva.host)->capture_default_str();
  serve_cmd->add_option("--port", sva.port)->check(CLI::Range(0, 65535))->capture_default_str();
  serve_cmd->add_option("--top-k", sva.top_k, "Task classes offered as filters (0: none)")
    ->check(CLI::NonNegativeNumber)
    ->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError & e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*validate_cmd) return do_validate(va, out, err);
    if (*stats_cmd) return do_stats(sa, out, err);
    if (*remap_cmd) {
      if (!ra.top_k && !ra.classless && ra.mapping.empty()) {
        throw CLI::ValidationError("remap needs one of --top-k, --classless or --mapping");
      }
      return do_remap(ra, out, err);
    }
    if (*split_cmd) return do_split(spa, globals, out, err);
    if (*transplant_cmd) return do_transplant(ta, globals, out, err);
    if (*augment_cmd) return do_augment(aa, globals, out, err);
    if (*evaluate_cmd) return do_evaluate(ea, out, err);
    if (*serve_cmd) return do_serve(sva, out, err);
  } catch (const CLI::Error & e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception & e) {
    err << "error: " << e.what() << '\n';
    return kExitDataViolation;
  }
  return kExitUsage;
}

}  // namespace litterkit::cli
