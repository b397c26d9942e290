// Acceptance gate. Each criterion prints one line:
//   PASS <id> <name>: <detail> [<seconds>s]
// Run with no arguments for all criteria, or pass criterion ids.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "gradcheck.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"
#include "dentvis/app/fixtures.hpp"
#include "dentvis/app/pipeline.hpp"
#include "dentvis/codebook/codebook.hpp"
#include "dentvis/core/rng.hpp"
#include "dentvis/eval/confusion.hpp"
#include "dentvis/eval/folds.hpp"
#include "dentvis/nn/classic_units.hpp"
#include "dentvis/nn/models.hpp"
#include "dentvis/nn/network.hpp"
#include "dentvis/segment/segment.hpp"

using namespace dentvis;
using namespace dentvis::testing;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

template <typename... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// ---------------------------------------------------------------- 1

struct ToothRow {
  int tooth;
  std::int64_t pcp, tp;
  double precision, recall, f1;
};

// Published per-tooth rows; every tooth has CP = 140.
constexpr ToothRow kToothRows[] = {
    {16, 140, 136, 0.9714, 0.9714, 0.9714}, {17, 140, 136, 0.9714, 0.9714, 0.9714},
    {13, 139, 135, 0.9712, 0.9643, 0.9677}, {23, 136, 133, 0.9779, 0.95, 0.9637},
    {36, 138, 133, 0.9638, 0.95, 0.9569},   {46, 139, 133, 0.9568, 0.95, 0.9534},
    {37, 140, 133, 0.95, 0.95, 0.95},       {47, 138, 131, 0.9493, 0.9357, 0.9425},
    {27, 143, 133, 0.9301, 0.95, 0.9399},   {26, 139, 131, 0.9424, 0.9357, 0.939},
    {11, 140, 130, 0.9286, 0.9286, 0.9286}, {43, 143, 131, 0.9161, 0.9357, 0.9258},
    {35, 150, 134, 0.8933, 0.9571, 0.9241}, {44, 143, 130, 0.9091, 0.9286, 0.9187},
    {21, 137, 127, 0.927, 0.9071, 0.9169},  {45, 138, 127, 0.9203, 0.9071, 0.9137},
    {12, 138, 125, 0.9058, 0.8929, 0.8993}, {34, 137, 124, 0.9051, 0.8857, 0.8953},
    {22, 141, 125, 0.8865, 0.8929, 0.8897}, {24, 137, 122, 0.8905, 0.8714, 0.8808},
    {33, 134, 119, 0.8881, 0.85, 0.8686},   {14, 136, 119, 0.875, 0.85, 0.8623},
    {25, 147, 123, 0.8367, 0.8786, 0.8571}, {15, 147, 122, 0.8299, 0.8714, 0.8501},
    {32, 141, 103, 0.7305, 0.7357, 0.7331}, {42, 143, 102, 0.7133, 0.7286, 0.7209},
    {31, 140, 100, 0.7143, 0.7143, 0.7143}, {41, 136, 89, 0.6544, 0.6357, 0.6449},
};

Outcome per_tooth_metric_rows() {
  double worst = 0;
  int worst_tooth = 0;
  for (const auto& r : kToothRows) {
    const auto m = metrics_from_counts(140, r.pcp, r.tp);
    for (double d : {m.precision - r.precision, m.recall - r.recall, m.f1 - r.f1}) {
      if (std::abs(d) > worst) {
        worst = std::abs(d);
        worst_tooth = r.tooth;
      }
    }
  }
  return {worst <= 0.0005, fmt("28 rows, max |diff| %.6f (tooth %d), tolerance 0.0005", worst, worst_tooth)};
}

// ---------------------------------------------------------------- 2

Outcome fold_arithmetic() {
  const auto records = app::tooth_records(140, 28);
  const auto plan = kfold_plan(records, 14, 0);
  bool ok = records.size() == 3920;
  std::size_t min_train = SIZE_MAX, max_train = 0, min_val = SIZE_MAX, max_val = 0;
  for (std::uint32_t f = 0; f < 14; ++f) {
    const auto s = fold_split(records, plan, f);
    min_train = std::min(min_train, s.train.size());
    max_train = std::max(max_train, s.train.size());
    min_val = std::min(min_val, s.validation.size());
    max_val = std::max(max_val, s.validation.size());
    ok &= s.train.size() == 3640 && s.validation.size() == 280;
  }
  return {ok, fmt("14 folds, train %zu..%zu, validation %zu..%zu", min_train, max_train, min_val, max_val)};
}

// ---------------------------------------------------------------- 3

Outcome elkan_matches_lloyd() {
  bool ok = true;
  double worst_rel = 0;
  std::uint64_t lloyd_evals = 0, elkan_evals = 0;
  std::string first_failure;
  for (std::uint64_t inst = 0; inst < 20; ++inst) {
    Rng rng(Rng::mix(2024, inst));
    const std::size_t n = 250 * (inst + 1);
    const std::size_t m = std::min<std::size_t>(128, 8 + 6 * inst);
    const MatrixF x = inst % 4 == 3 ? random_matrix(n, 128, rng)
                                    : blobs(n, 128, 4 + rng.below(60), rng.uniform(0.5, 3.0), rng);
    const KMeansConfig cfg{m, 100, 1e-4, inst};
    const auto a = kmeans_lloyd(x, cfg);
    const auto b = kmeans_elkan(x, cfg);
    const double rel = std::abs(a.inertia - b.inertia) / std::max(a.inertia, 1e-300);
    worst_rel = std::max(worst_rel, rel);
    lloyd_evals += a.distance_evals;
    elkan_evals += b.distance_evals;
    const bool inst_ok = a.assignments == b.assignments && rel <= 1e-6 && b.distance_evals < a.distance_evals;
    if (!inst_ok && first_failure.empty())
      first_failure = fmt(" first failure: instance %llu (n %zu, m %zu)", static_cast<unsigned long long>(inst), n, m);
    ok &= inst_ok;
  }
  return {ok, fmt("20 instances, max inertia rel diff %.2e, distance evals %.3f of Lloyd", worst_rel,
                  static_cast<double>(elkan_evals) / static_cast<double>(lloyd_evals)) +
                  first_failure};
}

// ---------------------------------------------------------------- 4

Outcome gradient_checks() {
  using namespace dentvis::nn;
  struct Case {
    const char* name;
    Shape input;
    std::vector<LayerSpec> layers;
    LossKind loss;
  };
  const std::vector<Case> cases = {
      {"conv same", {2, 5, 5}, {Conv2d{3, 3, 3, 1, Padding::Same}, Flatten{}, Dense{4}, Softmax{}}, LossKind::Categorical},
      {"conv valid", {2, 6, 6}, {Conv2d{2, 3, 3, 1, Padding::Valid}, Flatten{}, Dense{3}, Softmax{}}, LossKind::Categorical},
      {"conv strided", {2, 7, 6}, {Conv2d{2, 3, 2, 2, Padding::Valid}, Flatten{}, Dense{3}, Sigmoid{}}, LossKind::Binary},
      {"conv same strided", {1, 6, 7}, {Conv2d{2, 3, 3, 2, Padding::Same}, Flatten{}, Dense{3}, Softmax{}}, LossKind::Categorical},
      {"relu", {3, 4, 4}, {Conv2d{2, 3, 3}, ReLU{}, Flatten{}, Dense{3}, Softmax{}}, LossKind::Categorical},
      {"maxpool", {2, 6, 5}, {Conv2d{2, 3, 3}, MaxPool2d{2}, Flatten{}, Dense{3}, Softmax{}}, LossKind::Categorical},
      {"flatten dense relu", {2, 3, 3}, {Flatten{}, Dense{6}, ReLU{}, Dense{4}, Sigmoid{}}, LossKind::Binary},
      {"dense sigmoid binary", {6}, {Dense{5}, Sigmoid{}}, LossKind::Binary},
      {"dense softmax categorical", {6}, {Dense{5}, Softmax{}}, LossKind::Categorical},
      {"dense sigmoid categorical", {6}, {Dense{5}, Sigmoid{}}, LossKind::Categorical},
      {"dense softmax binary", {6}, {Dense{5}, Softmax{}}, LossKind::Binary},
  };
  Rng rng(404);
  double worst = 0;
  std::string worst_where;
  std::size_t checked = 0, kinks = 0;
  auto run = [&](const std::string& name, const Network<double>& net, const Tensor<double>& x, const Tensor<double>& t,
                 LossKind loss, std::size_t limit) {
    const auto r = check_network(net, x, t, loss, limit);
    checked += r.checked;
    kinks += r.kinks;
    if (r.max_rel >= worst) {
      worst = r.max_rel;
      worst_where = name + " " + r.worst;
    }
  };
  for (const auto& c : cases) {
    auto net = make_network<double>(c.input, c.layers);
    init_he(net, 17);
    Shape bs = c.input;
    bs.insert(bs.begin(), 3);
    const auto x = random_tensor(bs, rng);
    const std::size_t k = net.output_shape()[0];
    const auto t = c.loss == LossKind::Binary ? random_tensor({3, k}, rng, 0, 1) : random_one_hot(3, k, rng);
    run(c.name, net, x, t, c.loss, 1u << 30);
  }
  // full 4-layer network under both heads; the 65K-entry dense weight is sampled
  for (const auto head : {Head::Softmax, Head::Sigmoid}) {
    auto net = build_4layer<double>({1, 8, 8}, 4, head);
    init_he(net, 23);
    const auto x = random_tensor({2, 1, 8, 8}, rng, 0, 1);
    const auto loss = head == Head::Softmax ? LossKind::Categorical : LossKind::Binary;
    const auto t = loss == LossKind::Binary ? random_tensor({2, 4}, rng, 0, 1) : random_one_hot(2, 4, rng);
    run(head == Head::Softmax ? "4-layer softmax" : "4-layer sigmoid", net, x, t, loss, 3000);
  }
  // excluded kink probes must stay rare or the check would say little
  return {worst < 1e-4 && kinks * 100 <= checked,
          fmt("%zu coordinates (%zu straddle a kink, excluded), max rel error %.3e at ", checked, kinks, worst) +
              worst_where};
}

// ---------------------------------------------------------------- 5

Outcome llc_contract() {
  Rng rng(55);
  const std::size_t m = 200, d = 128;
  MatrixF centers(m, d);
  for (auto& v : centers.data()) v = static_cast<float>(rng.uniform());
  const Codebook cb(std::move(centers));
  std::size_t bad_sum = 0, bad_nnz = 0, bad_recon = 0, bad_indicator = 0;
  double worst_excess = -1e30;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t knn = 1 + rng.below(10);
    std::vector<float> x(d);
    for (std::size_t t = 0; t < d; ++t) x[t] = static_cast<float>(rng.uniform());
    const auto code = llc_encode(x, cb, {knn, 1e-4});
    const double sum = std::accumulate(code.values.begin(), code.values.end(), 0.0);
    bad_sum += std::abs(sum - 1.0) > 1e-6;
    const auto nnz = std::count_if(code.values.begin(), code.values.end(), [](float v) { return v != 0.0f; });
    bad_nnz += code.indices.size() > knn || static_cast<std::size_t>(nnz) > knn;
    std::vector<double> recon(d, 0.0);
    for (std::size_t j = 0; j < code.indices.size(); ++j)
      for (std::size_t t = 0; t < d; ++t) recon[t] += static_cast<double>(code.values[j]) * cb.center(code.indices[j])[t];
    double err = 0, nn = 1e300;
    for (std::size_t t = 0; t < d; ++t) err += (x[t] - recon[t]) * (x[t] - recon[t]);
    for (std::size_t c = 0; c < m; ++c) nn = std::min(nn, sqdist(x, cb.center(c)));
    // float coefficients bound the comparison at 1e-6 of the distance
    const double excess = std::sqrt(err) - std::sqrt(nn);
    worst_excess = std::max(worst_excess, excess);
    bad_recon += excess > 1e-6 * std::max(1.0, std::sqrt(nn));

    const std::size_t hit = rng.below(m);
    const auto ind = llc_encode(cb.center(hit), cb, {knn, 1e-4});
    for (std::size_t j = 0; j < ind.indices.size(); ++j) {
      const float want = ind.indices[j] == hit ? 1.0f : 0.0f;
      bad_indicator += ind.values[j] != want;
    }
    bad_indicator += std::find(ind.indices.begin(), ind.indices.end(), hit) == ind.indices.end();
  }
  const bool ok = bad_sum == 0 && bad_nnz == 0 && bad_recon == 0 && bad_indicator == 0;
  return {ok, fmt("1000 encodes: sum violations %zu, nonzero violations %zu, reconstruction violations %zu "
                  "(max excess %.2e), indicator violations %zu",
                  bad_sum, bad_nnz, bad_recon, worst_excess, bad_indicator)};
}

// ---------------------------------------------------------------- 6

Outcome pyramid_dimension() {
  bool ok = feature_dim(500, {2}) == 10500;
  Rng rng(66);
  double worst_oracle = 0;
  std::size_t identity_misses = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t m = 8 + rng.below(40);
    const auto codes = random_codes(1 + rng.below(300), m, rng);
    const auto v = pool_pyramid(codes, m, {2});
    ok &= v.size() == feature_dim(m, {2});
    const auto want = pool_oracle(codes, m, 2);
    for (std::size_t i = 0; i < v.size(); ++i) worst_oracle = std::max(worst_oracle, std::abs(v[i] - want[i]));
    for (std::size_t j = 0; j < m; ++j) {
      float mx = -1e30f;
      for (std::size_t c = 0; c < 16; ++c) mx = std::max(mx, v[(5 + c) * m + j]);
      identity_misses += v[j] != mx;
    }
  }
  ok &= worst_oracle <= 1e-6 && identity_misses == 0;
  return {ok, fmt("feature_dim(500, 2) = %zu; 50 random pyramids: max |pool - oracle| %.2e, level-0 identity misses %zu",
                  feature_dim(500, {2}), worst_oracle, identity_misses)};
}

// ---------------------------------------------------------- 7, 8, 9

std::vector<app::Sample> to_samples(const std::vector<app::FixtureImage>& fx, Split split,
                                    const app::PipelineConfig& cfg, app::Task task) {
  std::vector<app::Sample> out;
  for (const auto& f : fx) {
    if (f.record.split != split) continue;
    out.push_back({app::prepare(AnyImage(f.image), cfg, task), f.record.class_index(), f.record.path});
  }
  return out;
}

Outcome bow_glyphs() {
  const auto fx = app::glyph_dataset(7, 50, 20, 64);
  app::PipelineConfig cfg;
  cfg.descriptor = app::DescriptorKind::Sift;
  cfg.dictionary_m = 200;
  cfg.pyramid_levels = 2;
  cfg.classifier = app::ClassifierKind::EcocSvm;
  cfg.input_size = 64;
  const auto train = to_samples(fx, Split::Train, cfg, app::Task::Tooth);
  const auto test = to_samples(fx, Split::Test, cfg, app::Task::Tooth);
  const auto model = app::train_model(train, app::Task::Tooth, cfg);
  const auto r = app::evaluate(model, test);
  return {r.accuracy >= 0.90, fmt("SIFT, M=200, L=2, ECOC-SVM on %zu train / %zu test glyphs: accuracy %.4f (need 0.90)",
                                  train.size(), test.size(), r.accuracy)};
}

Outcome cnn_glyphs() {
  const auto fx = app::glyph_dataset(7, 50, 20, 64);
  app::PipelineConfig cfg;
  cfg.classifier = app::ClassifierKind::Cnn4;
  cfg.input_size = 64;
  cfg.cnn.epochs = 10;
  cfg.seed = 3;
  const auto train = to_samples(fx, Split::Train, cfg, app::Task::Tooth);
  const auto test = to_samples(fx, Split::Test, cfg, app::Task::Tooth);
  nn::TrainHistory h1, h2;
  const auto a = app::train_model(train, app::Task::Tooth, cfg, {}, &h1);
  const auto b = app::train_model(train, app::Task::Tooth, cfg, {}, &h2);
  const auto ra = app::evaluate(a, test);
  const auto rb = app::evaluate(b, test);
  const auto& na = std::get<nn::Network<float>>(a.impl);
  const auto& nb = std::get<nn::Network<float>>(b.impl);
  bool same = h1 == h2 && ra.predicted == rb.predicted && na.params.size() == nb.params.size();
  for (std::size_t l = 0; same && l < na.params.size(); ++l)
    same = na.params[l].weight == nb.params[l].weight && na.params[l].bias == nb.params[l].bias;
  return {ra.accuracy >= 0.95 && same,
          fmt("4-layer CNN, %zu epochs: test accuracy %.4f (need 0.95), rerun bit-identical: %s", cfg.cnn.epochs,
              ra.accuracy, same ? "yes" : "no")};
}

Outcome zoom_trend() {
  double none_sum = 0, zoom_sum = 0;
  std::string per_seed;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto fx = app::sex_dataset(100 + seed, 100, 50, 32);
    double acc[2];
    for (int z = 0; z < 2; ++z) {
      app::PipelineConfig cfg;
      cfg.classifier = app::ClassifierKind::Cnn4;
      cfg.input_size = 32;
      cfg.cnn.epochs = 30;
      cfg.cnn.augment = z ? AugmentMode::Zoom : AugmentMode::None;
      cfg.seed = seed;
      const auto train = to_samples(fx, Split::Train, cfg, app::Task::Sex);
      const auto test = to_samples(fx, Split::Test, cfg, app::Task::Sex);
      acc[z] = app::evaluate(app::train_model(train, app::Task::Sex, cfg), test).accuracy;
    }
    none_sum += acc[0];
    zoom_sum += acc[1];
    per_seed += fmt(" %.3f/%.3f", acc[0], acc[1]);
  }
  return {zoom_sum >= none_sum, fmt("mean accuracy none %.4f, zoom %.4f; per seed none/zoom:", none_sum / 5, zoom_sum / 5) +
                                    per_seed};
}

// ---------------------------------------------------------------- 10

Outcome perceptron_xor() {
  const double inputs[4][2] = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  const int xor_out[4] = {0, 1, 1, 0};
  const int and_out[4] = {0, 0, 0, 1};
  std::size_t xor_hits = 0, and_hits = 0, grid = 0;
  for (int a = -20; a <= 20; ++a)
    for (int b = -20; b <= 20; ++b)
      for (int c = -20; c <= 20; ++c) {
        ++grid;
        const double w[2] = {a / 10.0, b / 10.0};
        const double th = c / 10.0;
        bool xr = true, nd = true;
        for (int i = 0; i < 4; ++i) {
          const int o = nn::perceptron_output(inputs[i], w, th);
          xr &= o == xor_out[i];
          nd &= o == and_out[i];
        }
        xor_hits += xr;
        and_hits += nd;
      }
  // AND is the control showing the search space is not empty of solutions
  return {xor_hits == 0 && and_hits > 0 && grid == 68921,
          fmt("%zu grid points: XOR solutions %zu, AND solutions %zu", grid, xor_hits, and_hits)};
}

// ---------------------------------------------------------------- 11

Outcome segmentation_sanity() {
  bool ok = true;
  std::string detail;
  for (int conn : {4, 8}) {
    SegmentationConfig cfg;
    cfg.connectivity = conn;
    const auto uni = fh_segment(GrayImage(64, 48, 0.5f), cfg);
    const auto two = fh_segment(app::two_block_image(64, 48), cfg);
    bool halves = two.segments == 2;
    for (std::size_t y = 0; halves && y < 48; ++y)
      for (std::size_t x = 0; x < 64; ++x) halves &= two.at(x, y) == (x < 32 ? 0u : 1u);
    const bool conn_ok = is_connected_partition(uni, conn) && is_connected_partition(two, conn);
    ok &= uni.segments == 1 && halves && conn_ok;
    detail += fmt("%s%d-connected: uniform %zu, two-block %zu%s, flood-fill %s", detail.empty() ? "" : "; ", conn,
                  uni.segments, two.segments, halves ? " (exact halves)" : "", conn_ok ? "ok" : "FAILED");
  }
  Rng rng(11);
  std::size_t disconnected = 0;
  for (int trial = 0; trial < 40; ++trial) {
    GrayImage img(8 + rng.below(40), 8 + rng.below(40));
    for (auto& v : img.pixels()) v = static_cast<float>(rng.uniform());
    SegmentationConfig cfg{rng.uniform(10, 800), 1 + rng.below(30), rng.uniform(0, 1.5), rng.below(2) ? 8 : 4};
    disconnected += !is_connected_partition(fh_segment(img, cfg), cfg.connectivity);
  }
  ok &= disconnected == 0;
  return {ok, detail + fmt("; 40 random images, disconnected outputs %zu", disconnected)};
}

// ---------------------------------------------------------------- 12

Outcome vgg16_walk() {
  using namespace dentvis::nn;
  const auto plan = plan_16layer(1000, 1.0);
  const auto shapes = walk_shapes({3, 224, 224}, plan);
  std::vector<Shape> conv_out, pool_out, dense_out;
  std::size_t params = 0;
  for (std::size_t i = 0; i < plan.size(); ++i) {
    if (std::holds_alternative<Conv2d>(plan[i])) conv_out.push_back(shapes[i + 1]);
    if (std::holds_alternative<MaxPool2d>(plan[i])) pool_out.push_back(shapes[i + 1]);
    if (std::holds_alternative<Dense>(plan[i])) dense_out.push_back(shapes[i + 1]);
    const auto [w, b] = layer_param_shapes(plan[i], shapes[i]);
    params += shape_size(w) + shape_size(b);
  }
  const std::vector<std::size_t> conv_ch = {64, 64, 128, 128, 256, 256, 256, 512, 512, 512, 512, 512, 512};
  const std::vector<std::size_t> conv_side = {224, 224, 112, 112, 56, 56, 56, 28, 28, 28, 14, 14, 14};
  bool ok = conv_out.size() == 13 && pool_out.size() == 5 && dense_out.size() == 3;
  for (std::size_t i = 0; ok && i < 13; ++i) ok = conv_out[i] == Shape{conv_ch[i], conv_side[i], conv_side[i]};
  const std::vector<Shape> pools = {{64, 112, 112}, {128, 56, 56}, {256, 28, 28}, {512, 14, 14}, {512, 7, 7}};
  ok = ok && pool_out == pools && dense_out == std::vector<Shape>{{4096}, {4096}, {1000}};
  // 138,357,544 is the standard VGG-16 parameter count for 224x224x3 input and 1000 classes
  ok = ok && params == 138357544;
  const std::string walk = fmt("scale 1 walk %s, %zu parameters", ok ? "matches" : "DIFFERS", params);

  // the built network agrees with the plan at scale 1 (small input keeps memory modest)
  const auto built = build_16layer<float>({3, 32, 32}, 10, 1.0);
  ok &= built.shapes == walk_shapes({3, 32, 32}, plan_16layer(10, 1.0));

  auto net = build_16layer<double>({1, 64, 64}, 5, 0.125);
  init_he(net, 31);
  Rng rng(12);
  const auto x = random_tensor({2, 1, 64, 64}, rng, 0, 1);
  const auto t = random_one_hot(2, 5, rng);
  const auto r = check_network(net, x, t, LossKind::Categorical, 96);
  ok &= r.max_rel < 1e-4 && r.kinks * 100 <= r.checked;
  return {ok, walk + fmt("; scale 0.125 on 1x64x64 (%zu parameters): %zu coordinates over every tensor (%zu straddle a "
                         "kink, excluded), max rel error %.3e at ",
                         net.parameter_count(), r.checked, r.kinks, r.max_rel) +
                  r.worst};
}

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {1, "per-tooth metric rows", per_tooth_metric_rows},
      {2, "fold arithmetic", fold_arithmetic},
      {3, "Elkan matches Lloyd", elkan_matches_lloyd},
      {4, "gradient checks", gradient_checks},
      {5, "LLC contract", llc_contract},
      {6, "pyramid dimension", pyramid_dimension},
      {7, "synthetic BoW accuracy", bow_glyphs},
      {8, "synthetic CNN accuracy and determinism", cnn_glyphs},
      {9, "zoom augmentation trend", zoom_trend},
      {10, "perceptron XOR infeasibility", perceptron_xor},
      {11, "segmentation sanity", segmentation_sanity},
      {12, "16-layer shape walk and gradient check", vgg16_walk},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
  if (ids.empty())
    for (const auto& c : criteria()) ids.push_back(c.id);

  int failures = 0;
  for (int id : ids) {
    const auto it = std::find_if(criteria().begin(), criteria().end(), [&](const Criterion& c) { return c.id == id; });
    if (it == criteria().end()) {
      std::printf("FAIL %d unknown criterion\n", id);
      ++failures;
      continue;
    }
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = it->run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %d %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", id, it->name, o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += !o.pass;
  }
  return failures == 0 ? 0 : 1;
}
