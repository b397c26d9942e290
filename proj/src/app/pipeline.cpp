#include "dentvis/app/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <set>

#include "dentvis/core/parallel.hpp"
#include "dentvis/core/rng.hpp"
#include "dentvis/imageio/transform.hpp"

namespace dentvis::app {

namespace {

RgbImage resize_rgb(const RgbImage& img, std::size_t w, std::size_t h) {
  std::vector<GrayImage> planes;
  for (int c = 0; c < 3; ++c) {
    GrayImage p(img.width(), img.height());
    for (std::size_t y = 0; y < img.height(); ++y)
      for (std::size_t x = 0; x < img.width(); ++x) p.at(x, y) = img.at(x, y)[c];
    planes.push_back(resize_bilinear(p, w, h));
  }
  RgbImage out(w, h);
  for (std::size_t y = 0; y < h; ++y)
    for (std::size_t x = 0; x < w; ++x)
      for (int c = 0; c < 3; ++c) out.at(x, y)[c] = planes[c].at(x, y);
  return out;
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

nn::Network<float> build_cnn(const PipelineConfig& cfg, std::size_t size, std::size_t k) {
  const nn::InitSpec init{-0.05, 0.05, Rng::mix(cfg.seed, 0x1417u)};
  if (cfg.classifier == ClassifierKind::Cnn4) return nn::build_4layer<float>({1, size, size}, k, cfg.cnn.head, init);
  return nn::build_16layer<float>({1, size, size}, k, cfg.cnn.width_scale, init, cfg.cnn.head);
}

}  // namespace

PreparedImage prepare(const AnyImage& img, const PipelineConfig& cfg, Task task) {
  const std::size_t s = cfg.input_size_for(task);
  PreparedImage out;
  if (const auto* g = std::get_if<GrayImage>(&img)) {
    out.gray = (g->width() == s && g->height() == s) ? *g : resize_bilinear(*g, s, s);
  } else {
    const auto& rgb = std::get<RgbImage>(img);
    RgbImage r = (rgb.width() == s && rgb.height() == s) ? rgb : resize_rgb(rgb, s, s);
    out.gray = to_gray(r);
    if (cfg.descriptor == DescriptorKind::Color && !is_cnn(cfg.classifier)) out.rgb = std::move(r);
  }
  return out;
}

std::vector<Sample> load_samples(const Manifest& m, const std::vector<SampleRecord>& records,
                                 const PipelineConfig& cfg) {
  std::vector<Sample> out(records.size());
  std::vector<std::string> errors(records.size());
  parallel_for(records.size(), [&](std::size_t i) {
    try {
      out[i].image = prepare(read_image(m.resolve(records[i])), cfg, m.task);
      out[i].class_index = records[i].class_index();
      out[i].path = records[i].path;
    } catch (const Error& e) {
      errors[i] = records[i].path + ": " + e.what();
    }
  });
  std::string all;
  for (const auto& e : errors)
    if (!e.empty()) all += "\n  " + e;
  require(all.empty(), Errc::Io, "failed to read images:" + all);
  return out;
}

DescriptorSet describe(const PreparedImage& img, const PipelineConfig& cfg) {
  const auto& b = cfg.bow;
  switch (cfg.descriptor) {
    case DescriptorKind::Sift:
      return dense_sift(img.gray, b.sift_grid);
    case DescriptorKind::Hog2x2:
      return hog(img.gray, b.hog_cell, 2, GridSpec{2 * b.hog_cell, b.hog_stride});
    case DescriptorKind::Hog3x3:
      return hog(img.gray, b.hog_cell, 3, GridSpec{3 * b.hog_cell, b.hog_stride});
    case DescriptorKind::Color:
      break;
  }
  std::vector<GridSpec> grids;
  for (auto p : b.color_patches) grids.push_back(GridSpec{p, std::max<std::size_t>(1, p / 2)});
  return color_names(img.rgb ? *img.rgb : to_rgb(img.gray), grids);
}

std::size_t Model::dense_id(std::uint32_t class_index) const {
  const auto it = std::lower_bound(classes.begin(), classes.end(), class_index);
  require(it != classes.end() && *it == class_index, Errc::TaskMismatch,
          "class " + class_label(task, class_index) + " is not known to the model");
  return static_cast<std::size_t>(it - classes.begin());
}

std::vector<float> bow_feature(const BowModel& m, const PreparedImage& img, const PipelineConfig& cfg) {
  const DescriptorSet d = describe(img, cfg);
  std::vector<PositionedCode> codes;
  codes.reserve(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto c = d.center(i);
    codes.push_back({c[0], c[1], llc_encode(d.vec(i), m.codebook, cfg.bow.llc)});
  }
  return pool_pyramid(codes, m.codebook.m(), PyramidConfig{cfg.pyramid_levels});
}

Model train_model(std::span<const Sample> train, Task task, const PipelineConfig& cfg, const Log& log,
                  nn::TrainHistory* history) {
  require(!train.empty(), Errc::EmptyManifest, "training split is empty");
  auto say = [&](const std::string& s) {
    if (log) log(s);
  };
  Model model;
  model.task = task;
  model.config = cfg;
  std::set<std::uint32_t> cls;
  for (const auto& s : train) cls.insert(s.class_index);
  model.classes.assign(cls.begin(), cls.end());
  std::vector<std::uint32_t> y(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) y[i] = static_cast<std::uint32_t>(model.dense_id(train[i].class_index));
  const std::size_t k = model.classes.size();

  if (is_cnn(cfg.classifier)) {
    const std::size_t size = cfg.input_size_for(task);
    nn::Network<float> net = build_cnn(cfg, size, k);
    std::vector<nn::LabeledImage> data;
    data.reserve(train.size());
    for (std::size_t i = 0; i < train.size(); ++i) data.push_back({train[i].image.gray, y[i]});
    nn::TrainOptions opts;
    opts.loss = cfg.cnn.loss;
    opts.optimizer = cfg.cnn.optimizer;
    opts.epochs = cfg.cnn.epochs;
    opts.batch_size = cfg.cnn.batch_size;
    opts.seed = cfg.seed;
    if (cfg.cnn.augment != AugmentMode::None)
      opts.augment = AugmentConfig{cfg.cnn.augment, cfg.cnn.shear_range, cfg.cnn.zoom_lo, cfg.cnn.zoom_hi, 0};
    opts.on_epoch = [&](std::size_t e, const nn::TrainHistory& h) {
      say("epoch " + std::to_string(e + 1) + "/" + std::to_string(cfg.cnn.epochs) + " loss " +
          std::to_string(h.loss.back()) + " train_acc " + std::to_string(h.train_acc.back()));
    };
    nn::TrainHistory h = nn::train(net, std::span<const nn::LabeledImage>(data), {}, opts);
    if (history) *history = std::move(h);
    model.impl = std::move(net);
    return model;
  }

  std::vector<DescriptorSet> sets(train.size());
  parallel_for(train.size(), [&](std::size_t i) { sets[i] = describe(train[i].image, cfg); });
  const MatrixF sample = sample_descriptors(sets, cfg.bow.sample_descriptors, Rng::mix(cfg.seed, 0x5a3u));
  require(sample.rows() > cfg.dictionary_m, Errc::DegenerateData,
          "dictionary_m " + std::to_string(cfg.dictionary_m) + " needs more than " + std::to_string(sample.rows()) +
              " sampled descriptors");
  say("descriptors sampled: " + std::to_string(sample.rows()) + " x " + std::to_string(sample.cols()));
  const KMeansConfig kc{cfg.dictionary_m, cfg.bow.kmeans_max_iter, cfg.bow.kmeans_tol, Rng::mix(cfg.seed, 0xd1cu)};
  KMeansResult km = cfg.bow.elkan ? kmeans_elkan(sample, kc) : kmeans_lloyd(sample, kc);
  say("dictionary: m=" + std::to_string(cfg.dictionary_m) + " iterations=" + std::to_string(km.iterations) +
      " inertia=" + std::to_string(km.inertia));

  BowModel bow;
  bow.codebook = std::move(km.codebook);
  const std::size_t dim = feature_dim(bow.codebook.m(), PyramidConfig{cfg.pyramid_levels});
  MatrixF x(train.size(), dim);
  parallel_for(train.size(), [&](std::size_t i) {
    const auto f = bow_feature(bow, train[i].image, cfg);
    std::copy(f.begin(), f.end(), x.row(i).begin());
  });
  say("encoded features: " + std::to_string(train.size()) + " x " + std::to_string(dim));
  if (cfg.classifier == ClassifierKind::Knn) {
    bow.classifier = knn_fit(std::move(x), y, cfg.knn_k, k);
  } else {
    bow.classifier = ecoc_train(x, y, cfg.svm_kernel, cfg.svm);
  }
  model.impl = std::move(bow);
  return model;
}

std::vector<std::uint32_t> predict(const Model& m, std::span<const Sample> samples) {
  std::vector<std::uint32_t> out(samples.size());
  if (const auto* net = std::get_if<nn::Network<float>>(&m.impl)) {
    std::vector<GrayImage> imgs;
    imgs.reserve(samples.size());
    for (const auto& s : samples) imgs.push_back(s.image.gray);
    const auto dense = nn::predict(*net, std::span<const GrayImage>(imgs));
    for (std::size_t i = 0; i < dense.size(); ++i) out[i] = m.classes[dense[i]];
    return out;
  }
  const auto& bow = std::get<BowModel>(m.impl);
  parallel_for(samples.size(), [&](std::size_t i) {
    const auto f = bow_feature(bow, samples[i].image, m.config);
    std::uint32_t id;
    if (const auto* knn = std::get_if<KnnModel>(&bow.classifier))
      id = knn_predict(*knn, f);
    else
      id = ecoc_predict(std::get<EcocModel>(bow.classifier), f);
    out[i] = m.classes[id];
  });
  return out;
}

EvalResult evaluate(const Model& m, std::span<const Sample> samples) {
  EvalResult r;
  r.confusion = ConfusionMatrix(m.classes.size());
  for (const auto& s : samples) m.dense_id(s.class_index);
  r.predicted.resize(samples.size());
  r.millis.resize(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    r.predicted[i] = predict(m, samples.subspan(i, 1))[0];
    r.millis[i] = ms_since(t0);
    r.confusion.accumulate(m.dense_id(samples[i].class_index), m.dense_id(r.predicted[i]));
  }
  r.accuracy = matrix_metrics(r.confusion).accuracy;
  return r;
}

}  // namespace dentvis::app
