#include "dentvis/nn/train.hpp"

#include <cmath>
#include <numeric>

#include "dentvis/core/rng.hpp"

namespace dentvis::nn {

template <typename T>
Tensor<T> to_batch(std::span<const GrayImage* const> images) {
  require(!images.empty(), Errc::ShapeMismatch, "empty batch");
  const std::size_t w = images[0]->width(), h = images[0]->height();
  Tensor<T> batch(Shape{images.size(), 1, h, w});
  T* dst = batch.data();
  for (const GrayImage* img : images) {
    require(img->width() == w && img->height() == h, Errc::ShapeMismatch, "batch images differ in size");
    for (float v : img->pixels()) *dst++ = static_cast<T>(v);
  }
  return batch;
}

template <typename T>
Tensor<T> one_hot(std::span<const std::uint32_t> labels, std::size_t k) {
  Tensor<T> t(Shape{labels.size(), k});
  for (std::size_t i = 0; i < labels.size(); ++i) {
    require(labels[i] < k, Errc::LabelOutOfRange,
            "label " + std::to_string(labels[i]) + " outside [0, " + std::to_string(k) + ")");
    t[i * k + labels[i]] = T{1};
  }
  return t;
}

template <typename T>
std::vector<std::uint32_t> predict(const Network<T>& net, std::span<const GrayImage> images, std::size_t batch_size) {
  std::vector<std::uint32_t> out;
  out.reserve(images.size());
  batch_size = std::max<std::size_t>(1, batch_size);
  std::vector<const GrayImage*> ptrs;
  for (std::size_t start = 0; start < images.size(); start += batch_size) {
    const std::size_t end = std::min(images.size(), start + batch_size);
    ptrs.clear();
    for (std::size_t i = start; i < end; ++i) ptrs.push_back(&images[i]);
    const auto labels = argmax_rows(infer(net, to_batch<T>(ptrs)));
    out.insert(out.end(), labels.begin(), labels.end());
  }
  return out;
}

namespace {

template <typename T>
double accuracy(const Network<T>& net, std::span<const LabeledImage> set, std::size_t batch_size) {
  std::vector<GrayImage> images;
  images.reserve(set.size());
  for (const auto& s : set) images.push_back(s.image);
  const auto pred = predict(net, std::span<const GrayImage>(images), batch_size);
  std::size_t ok = 0;
  for (std::size_t i = 0; i < set.size(); ++i) ok += pred[i] == set[i].label;
  return static_cast<double>(ok) / static_cast<double>(set.size());
}

}  // namespace

template <typename T>
TrainHistory train(Network<T>& net, std::span<const LabeledImage> data, std::span<const LabeledImage> eval,
                   const TrainOptions& opts) {
  require(!data.empty(), Errc::EmptyManifest, "training set is empty");
  require(opts.batch_size >= 1, Errc::InvalidArgument, "batch size must be >= 1");
  require(net.output_shape().size() == 1, Errc::ShapeMismatch, "network output must be flat");
  const std::size_t k = net.output_shape()[0];
  for (const auto& s : data)
    require(s.label < k, Errc::LabelOutOfRange, "label " + std::to_string(s.label) + " >= " + std::to_string(k));
  for (const auto& s : eval)
    require(s.label < k, Errc::LabelOutOfRange, "label " + std::to_string(s.label) + " >= " + std::to_string(k));

  OptimizerState<T> opt(opts.optimizer, opts.adadelta, opts.rmsprop);
  TrainHistory hist;
  std::vector<std::size_t> order(data.size());
  std::vector<GrayImage> augmented;
  std::vector<const GrayImage*> ptrs;
  std::vector<std::uint32_t> labels;

  for (std::size_t epoch = 0; epoch < opts.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(Rng::mix(opts.seed, 0x5348u, epoch));
    rng.shuffle(std::span<std::size_t>(order));

    double loss_sum = 0.0;
    std::size_t batches = 0, correct = 0;
    for (std::size_t start = 0; start < order.size(); start += opts.batch_size) {
      const std::size_t end = std::min(order.size(), start + opts.batch_size);
      ptrs.clear();
      labels.clear();
      augmented.clear();
      augmented.reserve(end - start);
      for (std::size_t i = start; i < end; ++i) {
        const LabeledImage& s = data[order[i]];
        labels.push_back(s.label);
        if (opts.augment && opts.augment->mode != AugmentMode::None) {
          AugmentConfig cfg = *opts.augment;
          cfg.seed = Rng::mix(opts.seed ^ opts.augment->seed, epoch + 1, order[i]);
          augmented.push_back(augment(s.image, cfg));
          ptrs.push_back(&augmented.back());
        } else {
          ptrs.push_back(&s.image);
        }
      }
      const Tensor<T> batch = to_batch<T>(ptrs);
      const Tensor<T> target = one_hot<T>(labels, k);
      const Activations<T> acts = forward(net, batch);
      const double loss = cross_entropy(target, acts.output(), opts.loss);
      require(std::isfinite(loss), Errc::NumericFailure, "training loss is not finite");
      loss_sum += loss;
      ++batches;
      const auto pred = argmax_rows(acts.output());
      for (std::size_t i = 0; i < pred.size(); ++i) correct += pred[i] == labels[i];
      const Gradients<T> grads = backward(net, acts, cross_entropy_grad(target, acts.output(), opts.loss));
      opt.step(net, grads);
    }
    hist.loss.push_back(loss_sum / static_cast<double>(batches));
    hist.train_acc.push_back(static_cast<double>(correct) / static_cast<double>(data.size()));
    hist.eval_acc.push_back(eval.empty() ? accuracy(net, data, opts.batch_size) : accuracy(net, eval, opts.batch_size));
    if (opts.on_epoch) opts.on_epoch(epoch, hist);
  }
  return hist;
}

#define DENTVIS_INSTANTIATE(T)                                                                                 \
  template Tensor<T> to_batch<T>(std::span<const GrayImage* const>);                                           \
  template Tensor<T> one_hot<T>(std::span<const std::uint32_t>, std::size_t);                                   \
  template TrainHistory train<T>(Network<T>&, std::span<const LabeledImage>, std::span<const LabeledImage>,   \
                                 const TrainOptions&);                                                         \
  template std::vector<std::uint32_t> predict<T>(const Network<T>&, std::span<const GrayImage>, std::size_t);

DENTVIS_INSTANTIATE(float)
DENTVIS_INSTANTIATE(double)
#undef DENTVIS_INSTANTIATE

}  // namespace dentvis::nn
