#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "dentvis/imageio/transform.hpp"
#include "dentvis/nn/loss.hpp"
#include "dentvis/nn/optimizer.hpp"

namespace dentvis::nn {

struct LabeledImage {
  GrayImage image;
  std::uint32_t label = 0;
};

/// One entry per epoch.
struct TrainHistory {
  std::vector<double> loss;       // mean batch loss over the epoch
  std::vector<double> train_acc;  // fraction of training samples predicted correctly during the epoch
  std::vector<double> eval_acc;   // accuracy on the held-out set after the epoch

  std::size_t size() const noexcept { return loss.size(); }
  friend bool operator==(const TrainHistory&, const TrainHistory&) = default;
};

struct TrainOptions {
  LossKind loss = LossKind::Categorical;
  OptimizerKind optimizer = OptimizerKind::Rmsprop;
  std::size_t epochs = 10;
  std::size_t batch_size = 32;
  std::uint64_t seed = 0;
  std::optional<AugmentConfig> augment;  // redrawn for every sample in every epoch
  AdadeltaParams adadelta;
  RmspropParams rmsprop;
  /// Called after each epoch with the index and the history so far.
  std::function<void(std::size_t, const TrainHistory&)> on_epoch;
};

/// Stacks gray images into a (n, 1, h, w) batch.
template <typename T>
Tensor<T> to_batch(std::span<const GrayImage* const> images);

/// One-hot targets of shape (n, k).
template <typename T>
Tensor<T> one_hot(std::span<const std::uint32_t> labels, std::size_t k);

/// Mini-batch training with a seeded per-epoch shuffle. When `eval` is empty
/// the held-out accuracy is measured on the unaugmented training set.
template <typename T>
TrainHistory train(Network<T>& net, std::span<const LabeledImage> data, std::span<const LabeledImage> eval,
                   const TrainOptions& opts);

/// Class index per image, evaluated in batches.
template <typename T>
std::vector<std::uint32_t> predict(const Network<T>& net, std::span<const GrayImage> images,
                                   std::size_t batch_size = 32);

}  // namespace dentvis::nn
