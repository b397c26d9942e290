#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dentvis/app/manifest.hpp"
#include "dentvis/classic/svm.hpp"
#include "dentvis/codebook/codebook.hpp"
#include "dentvis/imageio/transform.hpp"
#include "dentvis/nn/loss.hpp"
#include "dentvis/nn/models.hpp"
#include "dentvis/nn/optimizer.hpp"
#include "dentvis/segment/segment.hpp"

namespace dentvis::app {

enum class DescriptorKind { Sift, Hog2x2, Hog3x3, Color };
enum class ClassifierKind { Knn, EcocSvm, Cnn4, Cnn16 };

std::string_view descriptor_name(DescriptorKind d) noexcept;
std::string_view classifier_name(ClassifierKind c) noexcept;
bool is_cnn(ClassifierKind c) noexcept;

struct BowSettings {
  GridSpec sift_grid{16, 8};
  std::size_t hog_cell = 8;
  std::size_t hog_stride = 8;
  std::vector<std::size_t> color_patches{8, 16, 24};  // stride is half the patch
  std::size_t sample_descriptors = 100000;
  bool elkan = true;
  std::size_t kmeans_max_iter = 100;
  double kmeans_tol = 1e-4;
  LlcConfig llc;
};

struct CnnSettings {
  std::size_t epochs = 10;
  std::size_t batch_size = 32;
  nn::OptimizerKind optimizer = nn::OptimizerKind::Rmsprop;
  nn::LossKind loss = nn::LossKind::Categorical;
  nn::Head head = nn::Head::Softmax;
  AugmentMode augment = AugmentMode::None;
  double shear_range = 0.2;
  double zoom_lo = 0.8;
  double zoom_hi = 1.2;
  double width_scale = 0.125;  // 16-layer model only
};

struct VizSettings {
  std::size_t hog_cell = 8;
  std::size_t scale = 1;  // glyph pixels per cell = 8 * scale
};

struct PipelineConfig {
  DescriptorKind descriptor = DescriptorKind::Sift;
  std::optional<std::size_t> input_size;  // default 128 for teeth, 640 for sex
  std::size_t dictionary_m = 200;
  std::size_t pyramid_levels = 2;
  ClassifierKind classifier = ClassifierKind::EcocSvm;
  std::uint64_t seed = 0;
  BowSettings bow;
  std::size_t knn_k = 5;
  KernelSpec svm_kernel;
  SvmOptions svm;
  CnnSettings cnn;
  SegmentationConfig segment;
  VizSettings viz;

  std::size_t input_size_for(Task t) const { return input_size.value_or(t == Task::Tooth ? 128 : 640); }
};

/// Unknown keys, wrong types and out-of-range values raise ConfigError.
PipelineConfig parse_config(const nlohmann::json& j);
PipelineConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const PipelineConfig& cfg);

}  // namespace dentvis::app
