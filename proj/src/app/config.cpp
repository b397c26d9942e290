#include "dentvis/app/config.hpp"

#include <fstream>
#include <set>

namespace dentvis::app {

using nlohmann::json;

namespace {

// Typed access to one JSON object that rejects keys nobody asked for.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    require(j_.is_object(), Errc::ConfigError, path_ + " must be an object");
  }

  template <typename T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception& e) {
      fail(Errc::ConfigError, path_ + "." + key + ": " + e.what());
    }
  }

  std::optional<Section> sub(const char* key) {
    seen_.insert(key);
    if (!j_.contains(key)) return std::nullopt;
    return Section(j_.at(key), path_ + "." + key);
  }

  template <typename E>
  void choice(const char* key, E& out, std::initializer_list<std::pair<const char*, E>> options) {
    std::string name;
    get(key, name);
    if (name.empty()) return;
    for (const auto& [n, v] : options)
      if (name == n) {
        out = v;
        return;
      }
    fail(Errc::ConfigError, path_ + "." + key + ": unknown value '" + name + "'");
  }

  void finish() const {
    for (const auto& [k, v] : j_.items())
      require(seen_.count(k) > 0, Errc::ConfigError, path_ + ": unknown key '" + k + "'");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void check(bool ok, const std::string& what) { require(ok, Errc::ConfigError, what); }

}  // namespace

std::string_view descriptor_name(DescriptorKind d) noexcept {
  switch (d) {
    case DescriptorKind::Sift:
      return "sift";
    case DescriptorKind::Hog2x2:
      return "hog2x2";
    case DescriptorKind::Hog3x3:
      return "hog3x3";
    case DescriptorKind::Color:
      break;
  }
  return "color";
}

std::string_view classifier_name(ClassifierKind c) noexcept {
  switch (c) {
    case ClassifierKind::Knn:
      return "knn";
    case ClassifierKind::EcocSvm:
      return "ecoc_svm";
    case ClassifierKind::Cnn4:
      return "cnn4";
    case ClassifierKind::Cnn16:
      break;
  }
  return "cnn16";
}

bool is_cnn(ClassifierKind c) noexcept { return c == ClassifierKind::Cnn4 || c == ClassifierKind::Cnn16; }

PipelineConfig parse_config(const json& j) {
  PipelineConfig c;
  Section root(j, "config");
  root.choice("descriptor", c.descriptor,
              {{"sift", DescriptorKind::Sift},
               {"hog2x2", DescriptorKind::Hog2x2},
               {"hog3x3", DescriptorKind::Hog3x3},
               {"color", DescriptorKind::Color}});
  root.choice("classifier", c.classifier,
              {{"knn", ClassifierKind::Knn},
               {"ecoc_svm", ClassifierKind::EcocSvm},
               {"cnn4", ClassifierKind::Cnn4},
               {"cnn16", ClassifierKind::Cnn16}});
  std::size_t input = 0;
  root.get("input_size", input);
  if (input) c.input_size = input;
  root.get("dictionary_m", c.dictionary_m);
  root.get("pyramid_levels", c.pyramid_levels);
  root.get("seed", c.seed);

  if (auto s = root.sub("bow")) {
    std::size_t patch = c.bow.sift_grid.patch, stride = c.bow.sift_grid.stride;
    s->get("sift_patch", patch);
    s->get("sift_stride", stride);
    c.bow.sift_grid = {patch, stride};
    s->get("hog_cell", c.bow.hog_cell);
    s->get("hog_stride", c.bow.hog_stride);
    s->get("color_patches", c.bow.color_patches);
    s->get("sample_descriptors", c.bow.sample_descriptors);
    s->get("elkan", c.bow.elkan);
    s->get("kmeans_max_iter", c.bow.kmeans_max_iter);
    s->get("kmeans_tol", c.bow.kmeans_tol);
    s->get("llc_knn", c.bow.llc.knn);
    s->get("llc_beta", c.bow.llc.beta);
    s->finish();
  }
  if (auto s = root.sub("knn")) {
    s->get("k", c.knn_k);
    s->finish();
  }
  if (auto s = root.sub("svm")) {
    s->choice("kernel", c.svm_kernel.kind, {{"linear", KernelKind::Linear}, {"gaussian", KernelKind::Gaussian}});
    s->get("gamma", c.svm_kernel.gamma);
    s->get("c", c.svm.c);
    s->get("tol", c.svm.tol);
    s->get("max_passes", c.svm.max_passes);
    s->finish();
  }
  if (auto s = root.sub("cnn")) {
    s->get("epochs", c.cnn.epochs);
    s->get("batch_size", c.cnn.batch_size);
    s->choice("optimizer", c.cnn.optimizer,
              {{"rmsprop", nn::OptimizerKind::Rmsprop}, {"adadelta", nn::OptimizerKind::Adadelta}});
    s->choice("loss", c.cnn.loss, {{"categorical", nn::LossKind::Categorical}, {"binary", nn::LossKind::Binary}});
    s->choice("head", c.cnn.head, {{"softmax", nn::Head::Softmax}, {"sigmoid", nn::Head::Sigmoid}});
    s->choice("augment", c.cnn.augment,
              {{"none", AugmentMode::None}, {"shear", AugmentMode::Shear}, {"zoom", AugmentMode::Zoom}});
    s->get("shear_range", c.cnn.shear_range);
    s->get("zoom_lo", c.cnn.zoom_lo);
    s->get("zoom_hi", c.cnn.zoom_hi);
    s->get("width_scale", c.cnn.width_scale);
    s->finish();
  }
  if (auto s = root.sub("segment")) {
    s->get("k", c.segment.k);
    s->get("min_size", c.segment.min_size);
    s->get("sigma", c.segment.sigma);
    s->get("connectivity", c.segment.connectivity);
    s->finish();
  }
  if (auto s = root.sub("viz")) {
    s->get("hog_cell", c.viz.hog_cell);
    s->get("scale", c.viz.scale);
    s->finish();
  }
  root.finish();

  check(!c.input_size || *c.input_size >= 8, "input_size must be >= 8");
  check(c.dictionary_m >= 2, "dictionary_m must be >= 2");
  check(c.pyramid_levels <= 4, "pyramid_levels must be <= 4");
  check(c.bow.sift_grid.patch >= 8 && c.bow.sift_grid.patch % 4 == 0 && c.bow.sift_grid.stride >= 1 &&
            c.bow.sift_grid.stride <= c.bow.sift_grid.patch,
        "sift patch must be a multiple of 4 >= 8 with 1 <= stride <= patch");
  check(c.bow.hog_cell >= 2 && c.bow.hog_stride >= 1, "hog cell must be >= 2 and stride >= 1");
  check(!c.bow.color_patches.empty(), "color_patches must be non-empty");
  for (auto p : c.bow.color_patches) check(p >= 4, "color patches must be >= 4");
  check(c.bow.sample_descriptors >= c.dictionary_m, "sample_descriptors must be >= dictionary_m");
  check(c.bow.kmeans_max_iter >= 1 && c.bow.kmeans_tol >= 0.0, "kmeans_max_iter >= 1 and kmeans_tol >= 0");
  check(c.bow.llc.knn >= 1 && c.bow.llc.beta >= 0.0, "llc_knn >= 1 and llc_beta >= 0");
  check(c.knn_k >= 1, "knn.k must be >= 1");
  check(c.svm.c > 0.0 && c.svm.tol > 0.0 && c.svm.max_passes >= 1 && c.svm_kernel.gamma >= 0.0,
        "svm c, tol > 0, max_passes >= 1, gamma >= 0");
  check(c.cnn.epochs >= 1 && c.cnn.batch_size >= 1, "cnn epochs and batch_size must be >= 1");
  check(c.cnn.shear_range >= 0.0 && c.cnn.zoom_lo > 0.0 && c.cnn.zoom_lo <= c.cnn.zoom_hi,
        "shear_range >= 0 and 0 < zoom_lo <= zoom_hi");
  check(c.cnn.width_scale > 0.0, "width_scale must be > 0");
  check(c.viz.hog_cell >= 2 && c.viz.scale >= 1, "viz hog_cell >= 2 and scale >= 1");
  try {
    validate(c.segment);
  } catch (const Error& e) {
    fail(Errc::ConfigError, e.what());
  }
  return c;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), Errc::Io, "cannot open config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    fail(Errc::ConfigError, path.string() + ": " + e.what());
  }
  return parse_config(j);
}

json to_json(const PipelineConfig& c) {
  auto optimizer = c.cnn.optimizer == nn::OptimizerKind::Rmsprop ? "rmsprop" : "adadelta";
  auto loss = c.cnn.loss == nn::LossKind::Categorical ? "categorical" : "binary";
  auto head = c.cnn.head == nn::Head::Softmax ? "softmax" : "sigmoid";
  auto augment = c.cnn.augment == AugmentMode::None ? "none" : c.cnn.augment == AugmentMode::Shear ? "shear" : "zoom";
  json j = {
      {"descriptor", descriptor_name(c.descriptor)},
      {"classifier", classifier_name(c.classifier)},
      {"dictionary_m", c.dictionary_m},
      {"pyramid_levels", c.pyramid_levels},
      {"seed", c.seed},
      {"bow",
       {{"sift_patch", c.bow.sift_grid.patch},
        {"sift_stride", c.bow.sift_grid.stride},
        {"hog_cell", c.bow.hog_cell},
        {"hog_stride", c.bow.hog_stride},
        {"color_patches", c.bow.color_patches},
        {"sample_descriptors", c.bow.sample_descriptors},
        {"elkan", c.bow.elkan},
        {"kmeans_max_iter", c.bow.kmeans_max_iter},
        {"kmeans_tol", c.bow.kmeans_tol},
        {"llc_knn", c.bow.llc.knn},
        {"llc_beta", c.bow.llc.beta}}},
      {"knn", {{"k", c.knn_k}}},
      {"svm",
       {{"kernel", c.svm_kernel.kind == KernelKind::Linear ? "linear" : "gaussian"},
        {"gamma", c.svm_kernel.gamma},
        {"c", c.svm.c},
        {"tol", c.svm.tol},
        {"max_passes", c.svm.max_passes}}},
      {"cnn",
       {{"epochs", c.cnn.epochs},
        {"batch_size", c.cnn.batch_size},
        {"optimizer", optimizer},
        {"loss", loss},
        {"head", head},
        {"augment", augment},
        {"shear_range", c.cnn.shear_range},
        {"zoom_lo", c.cnn.zoom_lo},
        {"zoom_hi", c.cnn.zoom_hi},
        {"width_scale", c.cnn.width_scale}}},
      {"segment",
       {{"k", c.segment.k},
        {"min_size", c.segment.min_size},
        {"sigma", c.segment.sigma},
        {"connectivity", c.segment.connectivity}}},
      {"viz", {{"hog_cell", c.viz.hog_cell}, {"scale", c.viz.scale}}},
  };
  if (c.input_size) j["input_size"] = *c.input_size;
  return j;
}

}  // namespace dentvis::app
