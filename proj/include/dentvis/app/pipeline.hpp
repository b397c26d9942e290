#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "dentvis/app/config.hpp"
#include "dentvis/app/manifest.hpp"
#include "dentvis/classic/ecoc.hpp"
#include "dentvis/classic/knn.hpp"
#include "dentvis/eval/confusion.hpp"
#include "dentvis/features/extractors.hpp"
#include "dentvis/imageio/codec.hpp"
#include "dentvis/nn/train.hpp"

namespace dentvis::app {

/// Image resized to the pipeline input size; rgb is kept only for color descriptors.
struct PreparedImage {
  GrayImage gray;
  std::optional<RgbImage> rgb;
};

struct Sample {
  PreparedImage image;
  std::uint32_t class_index = 0;
  std::string path;
};

PreparedImage prepare(const AnyImage& img, const PipelineConfig& cfg, Task task);

/// Decodes and prepares every record. Decode failures are collected and
/// reported together as one Io error.
std::vector<Sample> load_samples(const Manifest& m, const std::vector<SampleRecord>& records, const PipelineConfig& cfg);

DescriptorSet describe(const PreparedImage& img, const PipelineConfig& cfg);

struct BowModel {
  Codebook codebook;
  std::variant<KnnModel, EcocModel> classifier;  // trained on dense ids 0..K-1
};

struct Model {
  Task task = Task::Tooth;
  PipelineConfig config;
  std::vector<std::uint32_t> classes;  // class index per dense id, ascending
  std::variant<BowModel, nn::Network<float>> impl;

  std::size_t dense_id(std::uint32_t class_index) const;
};

using Log = std::function<void(const std::string&)>;

/// Pooled BoW feature for one image.
std::vector<float> bow_feature(const BowModel& m, const PreparedImage& img, const PipelineConfig& cfg);

/// Dictionary, encoding, pooling and classifier, or CNN training.
Model train_model(std::span<const Sample> train, Task task, const PipelineConfig& cfg, const Log& log = {},
                  nn::TrainHistory* history = nullptr);

/// Predicted class index per image.
std::vector<std::uint32_t> predict(const Model& m, std::span<const Sample> samples);

struct EvalResult {
  ConfusionMatrix confusion;  // over Model::classes order
  std::vector<std::uint32_t> predicted;
  std::vector<double> millis;  // per-image classification time
  double accuracy = 0.0;
};

/// Throws TaskMismatch when a sample's class is not among the model's classes.
EvalResult evaluate(const Model& m, std::span<const Sample> samples);

}  // namespace dentvis::app
