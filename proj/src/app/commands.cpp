#include "dentvis/app/commands.hpp"

#include <chrono>
#include <fstream>
#include <map>
#include <set>

#include "dentvis/app/csv.hpp"
#include "dentvis/app/fixtures.hpp"
#include "dentvis/app/pipeline.hpp"
#include "dentvis/app/serialize.hpp"
#include "dentvis/app/viz.hpp"
#include "dentvis/eval/folds.hpp"

namespace dentvis::app {

namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::ofstream open_out(const fs::path& path) {
  fs::create_directories(path.parent_path().empty() ? fs::path(".") : path.parent_path());
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), Errc::Io, "cannot write " + path.string());
  return out;
}

Manifest load_nonempty_manifest(const CommandOptions& o) {
  require(!o.manifest.empty(), Errc::ConfigError, "--manifest is required");
  Manifest m = read_manifest(o.manifest);
  require(!m.records.empty(), Errc::EmptyManifest, "manifest " + o.manifest.string() + " has no records");
  return m;
}

std::vector<SampleRecord> train_records(const Manifest& m) {
  auto r = m.with_split(Split::Train);
  require(!r.empty(), Errc::EmptyManifest, "manifest has no train rows");
  return r;
}

std::vector<SampleRecord> test_records(const Manifest& m) {
  auto r = m.with_split(Split::Test);
  return r.empty() ? m.records : r;
}

std::string sanitize(const std::string& path) {
  std::string s;
  for (char c : path) s += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.') ? c : '_';
  return s;
}

double train_accuracy(const Model& m, std::span<const Sample> train) {
  const auto pred = predict(m, train);
  std::size_t ok = 0;
  for (std::size_t i = 0; i < train.size(); ++i) ok += pred[i] == train[i].class_index;
  return static_cast<double>(ok) / static_cast<double>(train.size());
}

void write_metrics(const fs::path& path, Task task, const std::vector<std::uint32_t>& classes,
                   const ConfusionMatrix& cm) {
  auto out = open_out(path);
  write_csv_row(out, {"tooth", "pcp", "tp", "precision", "recall", "f1"});
  for (const auto& r : matrix_metrics(cm).rows)
    write_csv_row(out, {class_label(task, classes[r.class_id]), std::to_string(r.pcp), std::to_string(r.tp),
                        fixed(r.precision, 4), fixed(r.recall, 4), fixed(r.f1, 4)});
}

void write_confusion(const fs::path& path, Task task, const std::vector<std::uint32_t>& classes,
                     const ConfusionMatrix& cm) {
  auto out = open_out(path);
  CsvRow header{"true\\predicted"};
  for (auto c : classes) header.push_back(class_label(task, c));
  write_csv_row(out, header);
  for (std::size_t i = 0; i < classes.size(); ++i) {
    CsvRow row{class_label(task, classes[i])};
    for (std::size_t j = 0; j < classes.size(); ++j) row.push_back(std::to_string(cm.at(i, j)));
    write_csv_row(out, row);
  }
}

void write_predictions(const fs::path& path, Task task, std::span<const Sample> samples, const EvalResult& r) {
  auto out = open_out(path);
  write_csv_row(out, {"path", "true", "predicted", "correct", "millis"});
  for (std::size_t i = 0; i < samples.size(); ++i)
    write_csv_row(out, {samples[i].path, class_label(task, samples[i].class_index), class_label(task, r.predicted[i]),
                        samples[i].class_index == r.predicted[i] ? "1" : "0", fixed(r.millis[i], 3)});
}

void write_report(const fs::path& dir, const Model& m, std::span<const Sample> samples, const EvalResult& r) {
  write_metrics(dir / "metrics.csv", m.task, m.classes, r.confusion);
  write_confusion(dir / "confusion.csv", m.task, m.classes, r.confusion);
  write_predictions(dir / "predictions.csv", m.task, samples, r);
}

std::vector<Sample> select(const std::vector<Sample>& all, const std::vector<std::size_t>& idx) {
  std::vector<Sample> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(all[i]);
  return out;
}

void eval_kfold(const CommandOptions& o, const Manifest& m, const PipelineConfig& cfg, std::ostream& log) {
  const FoldPlan plan = kfold_plan(m.records, o.kfold, cfg.seed);
  const auto samples = load_samples(m, m.records, cfg);
  std::set<std::uint32_t> cls;
  for (const auto& s : samples) cls.insert(s.class_index);
  const std::vector<std::uint32_t> classes(cls.begin(), cls.end());
  auto global = [&](std::uint32_t c) {
    return static_cast<std::size_t>(std::lower_bound(classes.begin(), classes.end(), c) - classes.begin());
  };
  ConfusionMatrix pooled(classes.size());
  auto summary = open_out(o.out / "kfold.csv");
  write_csv_row(summary, {"fold", "train_images", "validation_images", "accuracy"});
  for (std::uint32_t f = 0; f < plan.k; ++f) {
    const FoldSplit split = fold_split(m.records, plan, f);
    const auto train = select(samples, split.train), val = select(samples, split.validation);
    log << "fold " << f + 1 << "/" << plan.k << ": " << train.size() << " train, " << val.size() << " validation\n";
    const Model model = train_model(train, m.task, cfg);
    const EvalResult r = evaluate(model, val);
    char name[32];
    std::snprintf(name, sizeof name, "fold_%02u", f + 1);
    write_report(o.out / name, model, val, r);
    for (std::size_t i = 0; i < val.size(); ++i) pooled.accumulate(global(val[i].class_index), global(r.predicted[i]));
    write_csv_row(summary, {std::to_string(f + 1), std::to_string(train.size()), std::to_string(val.size()),
                            fixed(r.accuracy, 4)});
  }
  write_metrics(o.out / "pooled_metrics.csv", m.task, classes, pooled);
  write_confusion(o.out / "pooled_confusion.csv", m.task, classes, pooled);
  log << "accuracy " << fixed(matrix_metrics(pooled).accuracy, 4) << " (pooled over " << plan.k << " folds)\n";
}

}  // namespace

PipelineConfig resolve_config(const CommandOptions& o) {
  PipelineConfig cfg = o.config.empty() ? PipelineConfig{} : load_config(o.config);
  if (o.seed) cfg.seed = *o.seed;
  return cfg;
}

int exit_code(const Error& e) noexcept { return static_cast<int>(e.family()); }

void cmd_extract(const CommandOptions& o, std::ostream& log) {
  const PipelineConfig cfg = resolve_config(o);
  const Manifest m = load_nonempty_manifest(o);
  const fs::path dir = o.out / "descriptors";
  fs::create_directories(dir);
  auto index = open_out(dir / "index.csv");
  write_csv_row(index, {"path", "file", "count", "dim"});
  std::vector<std::string> failures;
  for (std::size_t i = 0; i < m.records.size(); ++i) {
    const auto& r = m.records[i];
    try {
      const PreparedImage img = prepare(read_image(m.resolve(r)), cfg, m.task);
      const DescriptorSet d = describe(img, cfg);
      const std::string file = sanitize(r.path) + ".pnc";
      save_container(dir / file, descriptors_to_container(d, {{"path", r.path},
                                                              {"descriptor", descriptor_name(cfg.descriptor)}}));
      write_csv_row(index, {r.path, file, std::to_string(d.size()), std::to_string(d.dim())});
      log << "[" << i + 1 << "/" << m.records.size() << "] " << r.path << ": " << d.size() << " x " << d.dim() << "\n";
    } catch (const Error& e) {
      failures.push_back(r.path + ": " + e.what());
      log << "[" << i + 1 << "/" << m.records.size() << "] " << r.path << ": FAILED " << e.what() << "\n";
    }
  }
  std::string all;
  for (const auto& f : failures) all += "\n  " + f;
  require(failures.empty(), Errc::Io, std::to_string(failures.size()) + " image(s) failed:" + all);
}

void cmd_train(const CommandOptions& o, std::ostream& log) {
  const auto t0 = Clock::now();
  const PipelineConfig cfg = resolve_config(o);
  const Manifest m = load_nonempty_manifest(o);
  const auto train = load_samples(m, train_records(m), cfg);
  nn::TrainHistory history;
  const Model model = train_model(train, m.task, cfg, [&](const std::string& s) { log << s << "\n"; }, &history);
  const ModelContainer c = model_to_container(model);
  save_container(o.out / "model.pnc", c);
  if (!history.loss.empty()) {
    auto out = open_out(o.out / "history.csv");
    write_csv_row(out, {"iteration", "loss", "train_acc", "eval_acc"});
    for (std::size_t i = 0; i < history.size(); ++i)
      write_csv_row(out, {std::to_string(i + 1), fixed(history.loss[i], 6), fixed(history.train_acc[i], 6),
                          fixed(history.eval_acc[i], 6)});
  }
  std::size_t dim = 0;
  for (const auto& t : c.tensors) dim += t.data.size();
  log << "model: " << c.module << " (" << classifier_name(cfg.classifier) << ")\n"
      << "classes: " << model.classes.size() << "\n"
      << "parameters: " << dim << "\n"
      << "train accuracy: " << fixed(train_accuracy(model, train), 4) << "\n"
      << "wall time: " << fixed(seconds_since(t0), 2) << " s\n";
}

void cmd_eval(const CommandOptions& o, std::ostream& log) {
  const Manifest m = load_nonempty_manifest(o);
  if (o.kfold > 0) {
    PipelineConfig cfg = o.model.empty() ? resolve_config(o) : model_from_container(load_container(o.model)).config;
    if (o.seed) cfg.seed = *o.seed;
    eval_kfold(o, m, cfg, log);
    return;
  }
  require(!o.model.empty(), Errc::ConfigError, "--model is required unless --kfold is given");
  const Model model = model_from_container(load_container(o.model));
  require(model.task == m.task, Errc::TaskMismatch,
          "model is a " + std::string(task_name(model.task)) + " model but the manifest is " +
              std::string(task_name(m.task)));
  const auto samples = load_samples(m, test_records(m), model.config);
  const auto t0 = Clock::now();
  const EvalResult r = evaluate(model, samples);
  const double secs = seconds_since(t0);
  write_report(o.out, model, samples, r);
  log << "accuracy " << fixed(r.accuracy, 4) << " (" << samples.size() << " images, " << fixed(secs, 2)
      << " s classification time)\n";
}

void cmd_sweep(const CommandOptions& o, std::ostream& log) {
  const PipelineConfig base = resolve_config(o);
  const Manifest m = load_nonempty_manifest(o);
  static const std::set<std::string> axes{"dictionary_m", "input_size", "pyramid_levels", "train_size"};
  require(axes.count(o.axis) > 0, Errc::ConfigError, "unknown sweep axis '" + o.axis + "'");
  require(!o.values.empty(), Errc::ConfigError, "sweep needs at least one axis value");
  std::vector<ClassifierKind> kinds;
  if (o.classifiers.empty()) kinds.push_back(base.classifier);
  for (const auto& name : o.classifiers) kinds.push_back(parse_config({{"classifier", name}}).classifier);

  std::vector<std::size_t> values;
  for (const auto& v : o.values) {
    try {
      values.push_back(static_cast<std::size_t>(std::stoull(v)));
    } catch (const std::exception&) {
      fail(Errc::ConfigError, "sweep value '" + v + "' is not a non-negative integer");
    }
  }
  auto out = open_out(o.out / "sweep.csv");
  write_csv_row(out, {"axis", "value", "classifier", "accuracy", "train_seconds"});
  const auto train_recs = train_records(m);
  for (std::size_t value : values) {
    for (ClassifierKind kind : kinds) {
      PipelineConfig cfg = base;
      cfg.classifier = kind;
      std::vector<SampleRecord> recs = train_recs;
      if (o.axis == "dictionary_m") cfg.dictionary_m = value;
      if (o.axis == "input_size") cfg.input_size = value;
      if (o.axis == "pyramid_levels") cfg.pyramid_levels = value;
      if (o.axis == "train_size") {
        // first `value` training rows of every class, so larger values nest smaller ones
        std::map<std::uint32_t, std::size_t> taken;
        recs.clear();
        for (const auto& r : train_recs)
          if (taken[r.class_index()]++ < value) recs.push_back(r);
      }
      const auto t0 = Clock::now();
      const Model model = train_model(load_samples(m, recs, cfg), m.task, cfg);
      const double secs = seconds_since(t0);
      const EvalResult r = evaluate(model, load_samples(m, test_records(m), cfg));
      write_csv_row(out, {o.axis, std::to_string(value), std::string(classifier_name(kind)), fixed(r.accuracy, 4),
                          fixed(secs, 2)});
      out.flush();
      log << o.axis << "=" << value << " " << classifier_name(kind) << ": accuracy " << fixed(r.accuracy, 4) << "\n";
    }
  }
}

void cmd_viz_hog(const CommandOptions& o, std::ostream& log) {
  const PipelineConfig cfg = resolve_config(o);
  require(!o.image.empty(), Errc::ConfigError, "--image is required");
  const GrayImage glyph = render_hog_glyphs(read_gray(o.image), cfg.viz.hog_cell, cfg.viz.scale);
  const fs::path path = o.out / (o.image.stem().string() + "_hog.png");
  fs::create_directories(o.out);
  write_image(path, glyph);
  log << "wrote " << path.string() << " (" << glyph.width() << "x" << glyph.height() << ")\n";
}

void cmd_viz_filters(const CommandOptions& o, std::ostream& log) {
  const PipelineConfig cfg = resolve_config(o);
  require(!o.model.empty(), Errc::ConfigError, "--model is required");
  const Model model = model_from_container(load_container(o.model));
  const auto* net = std::get_if<nn::Network<float>>(&model.impl);
  require(net != nullptr, Errc::LayerNotConvolutional, "model has no convolution layers");
  const std::size_t li = conv_layer_index(*net, o.layer);
  GrayImage grid;
  fs::path path;
  if (o.image.empty()) {
    grid = tile_grid(filter_tiles(*net, li), 8 * cfg.viz.scale);
    path = o.out / ("filters_layer" + std::to_string(o.layer) + ".png");
  } else {
    const PreparedImage img = prepare(read_image(o.image), model.config, model.task);
    grid = tile_grid(activation_tiles(*net, li, img.gray), cfg.viz.scale);
    path = o.out / (o.image.stem().string() + "_activations_layer" + std::to_string(o.layer) + ".png");
  }
  fs::create_directories(o.out);
  write_image(path, grid);
  log << "wrote " << path.string() << " (" << grid.width() << "x" << grid.height() << ")\n";
}

void cmd_segment(const CommandOptions& o, std::ostream& log) {
  const PipelineConfig cfg = resolve_config(o);
  require(!o.image.empty(), Errc::ConfigError, "--image is required");
  const LabelMap map = fh_segment(read_gray(o.image), cfg.segment);
  fs::create_directories(o.out);
  const std::string stem = o.image.stem().string();
  write_image(o.out / (stem + "_segments.png"), colorize_labels(map));

  struct Stat {
    std::size_t size = 0, x0 = SIZE_MAX, y0 = SIZE_MAX, x1 = 0, y1 = 0;
  };
  std::vector<Stat> stats(map.segments);
  for (std::size_t y = 0; y < map.height; ++y)
    for (std::size_t x = 0; x < map.width; ++x) {
      Stat& s = stats[map.at(x, y)];
      ++s.size;
      s.x0 = std::min(s.x0, x);
      s.y0 = std::min(s.y0, y);
      s.x1 = std::max(s.x1, x);
      s.y1 = std::max(s.y1, y);
    }
  auto out = open_out(o.out / (stem + "_regions.csv"));
  write_csv_row(out, {"segment_id", "size", "x0", "y0", "w", "h"});
  for (std::size_t i = 0; i < stats.size(); ++i) {
    const Stat& s = stats[i];
    write_csv_row(out, {std::to_string(i), std::to_string(s.size), std::to_string(s.x0), std::to_string(s.y0),
                        std::to_string(s.x1 - s.x0 + 1), std::to_string(s.y1 - s.y0 + 1)});
  }
  log << stem << ": " << map.segments << " segments\n";
}

void cmd_fixtures(const CommandOptions& o, std::ostream& log) {
  const std::uint64_t seed = o.seed.value_or(0);
  if (o.fixture_kind == "glyphs") {
    write_fixture(o.out, glyph_dataset(seed));
  } else if (o.fixture_kind == "sex") {
    write_fixture(o.out, sex_dataset(seed));
  } else if (o.fixture_kind == "blocks") {
    fs::create_directories(o.out);
    write_image(o.out / "uniform.png", GrayImage(64, 48, 0.5f));
    write_image(o.out / "two_block.png", two_block_image(64, 48));
  } else {
    fail(Errc::ConfigError, "unknown fixture kind '" + o.fixture_kind + "' (glyphs, sex, blocks)");
  }
  log << "wrote " << o.fixture_kind << " fixture to " << o.out.string() << "\n";
}

}  // namespace dentvis::app
