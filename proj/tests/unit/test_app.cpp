#include <cmath>
#include <filesystem>
#include <map>
#include <set>
#include <sstream>

#include "doctest.h"
#include "error_of.hpp"
#include "dentvis/app/config.hpp"
#include "dentvis/app/container.hpp"
#include "dentvis/app/csv.hpp"
#include "dentvis/app/fixtures.hpp"
#include "dentvis/app/manifest.hpp"
#include "dentvis/app/pipeline.hpp"
#include "dentvis/app/serialize.hpp"
#include "dentvis/app/viz.hpp"
#include "dentvis/core/rng.hpp"

using namespace dentvis;
using dentvis::testing::error_of;
using namespace dentvis::app;
using nlohmann::json;

namespace {

std::vector<Sample> to_samples(const std::vector<FixtureImage>& fx, Split split) {
  std::vector<Sample> out;
  for (const auto& f : fx)
    if (f.record.split == split) out.push_back({{f.image, std::nullopt}, f.record.class_index(), f.record.path});
  return out;
}

}  // namespace

TEST_SUITE("app") {
  TEST_CASE("CSV parsing and writing") {
    const auto rows = parse_csv("a,b,c\r\n\"x,1\",\"say \"\"hi\"\"\",\n\n3,,4\n");
    REQUIRE(rows.size() == 3);
    CHECK(rows[1] == CsvRow{"x,1", "say \"hi\"", ""});
    CHECK(rows[2] == CsvRow{"3", "", "4"});
    std::ostringstream out;
    write_csv_row(out, rows[1]);
    CHECK(out.str() == "\"x,1\",\"say \"\"hi\"\"\",\n");
    CHECK(parse_csv(out.str())[0] == rows[1]);
    CHECK(csv_field("plain") == "plain");
    CHECK(fixed(0.97142857, 4) == "0.9714");
    CHECK(fixed(1.0, 4) == "1.0000");
  }

  TEST_CASE("manifest parsing") {
    const auto m = parse_manifest(
        "path,label,patient_id,split\nimg/a.png,16,p1,train\nimg/b.png,41,p2,test\nimg/c.png,23,p2,\n", "/data");
    CHECK(m.task == Task::Tooth);
    REQUIRE(m.records.size() == 3);
    CHECK(m.records[0].class_index() == 5);
    CHECK(m.records[2].split == Split::Unassigned);
    CHECK(m.with_split(Split::Test).size() == 1);
    CHECK(m.resolve(m.records[0]) == std::filesystem::path("/data/img/a.png"));
    CHECK(parse_manifest(format_manifest(m), "/data").records.size() == 3);

    const auto s = parse_manifest("path,label,patient_id,split\nx.png,F,p1,train\n", ".");
    CHECK(s.task == Task::Sex);
    CHECK(class_label(Task::Sex, 1) == "F");
    CHECK(class_label(Task::Tooth, 21) == "41");

    CHECK(error_of([] { parse_manifest("file,label,patient,split\n", "."); }) == Errc::ConfigError);
    CHECK(error_of([] { parse_manifest("path,label,patient_id,split\na,16,p,train\na,17,p,train\n", "."); }) ==
          Errc::ConfigError);
    CHECK(error_of([] { parse_manifest("path,label,patient_id,split\na,16,p,train\nb,M,p,train\n", "."); }) ==
          Errc::TaskMismatch);
    CHECK(error_of([] { parse_manifest("path,label,patient_id,split\na,18,p,train\n", "."); }) ==
          Errc::ThirdMolarExcluded);
  }

  TEST_CASE("config defaults and round-trip") {
    const auto d = parse_config(json::object());
    CHECK(d.descriptor == DescriptorKind::Sift);
    CHECK(d.dictionary_m == 200);
    CHECK(d.pyramid_levels == 2);
    CHECK(d.input_size_for(Task::Tooth) == 128);
    CHECK(d.input_size_for(Task::Sex) == 640);
    CHECK(d.cnn.optimizer == nn::OptimizerKind::Rmsprop);

    const json j = {{"descriptor", "hog3x3"},
                    {"classifier", "knn"},
                    {"input_size", 64},
                    {"dictionary_m", 50},
                    {"seed", 9},
                    {"bow", {{"hog_cell", 6}, {"elkan", false}}},
                    {"knn", {{"k", 3}}},
                    {"cnn", {{"augment", "zoom"}, {"epochs", 4}}}};
    const auto c = parse_config(j);
    CHECK(c.descriptor == DescriptorKind::Hog3x3);
    CHECK(c.classifier == ClassifierKind::Knn);
    CHECK(c.input_size == 64u);
    CHECK(c.bow.hog_cell == 6);
    CHECK_FALSE(c.bow.elkan);
    CHECK(c.knn_k == 3);
    CHECK(c.cnn.augment == AugmentMode::Zoom);
    CHECK(to_json(parse_config(to_json(c))) == to_json(c));
  }

  TEST_CASE("config rejects unknown keys and bad values") {
    for (const json& bad : {json{{"descripter", "sift"}}, json{{"descriptor", "surf"}}, json{{"dictionary_m", "many"}},
                            json{{"bow", {{"sift_patch", 10}, {"bogus", 1}}}}, json{{"dictionary_m", 1}},
                            json{{"pyramid_levels", 7}}, json{{"cnn", {{"optimizer", "sgd"}}}}, json::array()})
      CHECK(error_of([&] { parse_config(bad); }) == Errc::ConfigError);
  }

  TEST_CASE("container round-trip is byte-identical") {
    ModelContainer c;
    c.module = "test";
    c.seed = 12345678901234ull;
    c.hyperparameters = {{"m", 3}, {"alpha", 0.5}};
    c.meta = {{"names", {"a", "b"}}};
    c.tensors.push_back({"w", {2, 3}, {1, 2, 3, 4, 5, -6.5f}});
    c.tensors.push_back({"empty", {0}, {}});
    const auto bytes = encode_container(c);
    CHECK(std::equal(bytes.begin(), bytes.begin() + 4, "PNC1"));
    const auto back = decode_container(bytes);
    CHECK(back.module == "test");
    CHECK(back.seed == c.seed);
    CHECK(back.tensor("w").data == c.tensors[0].data);
    CHECK(back.tensor("w").shape == std::vector<std::size_t>{2, 3});
    CHECK(encode_container(back) == bytes);
    CHECK(error_of([&] { back.tensor("nope"); }) == Errc::MalformedHeader);

    auto truncated = bytes;
    truncated.resize(truncated.size() - 3);
    CHECK(error_of([&] { decode_container(truncated); }) == Errc::TruncatedPayload);
    auto trailing = bytes;
    trailing.push_back(0);
    CHECK(error_of([&] { decode_container(trailing); }) == Errc::MalformedHeader);
    auto magic = bytes;
    magic[0] = 'X';
    CHECK(error_of([&] { decode_container(magic); }) == Errc::MalformedHeader);
  }

  TEST_CASE("descriptor sets serialize") {
    DescriptorSet d(3);
    const float a[] = {0.1f, 0.2f, 0.3f}, b[] = {1, 0, 0};
    d.add({0.25f, 0.75f}, a);
    d.add({0.5f, 0.5f}, b);
    const auto c = descriptors_to_container(d, {{"image", "x.png"}});
    CHECK(descriptors_from_container(decode_container(encode_container(c))) == d);
  }

  TEST_CASE("layer plans serialize") {
    const auto plan = nn::plan_16layer(7, 0.25, nn::Head::Sigmoid);
    const auto back = layers_from_json(layers_to_json(plan));
    REQUIRE(back.size() == plan.size());
    CHECK(layers_to_json(back) == layers_to_json(plan));
    CHECK_THROWS_AS(layers_from_json(json::array({{{"type", "lstm"}}})), Error);
  }

  TEST_CASE("trained models survive a container round-trip") {
    const auto fx = glyph_dataset(3, 6, 2, 32);
    const auto train = to_samples(fx, Split::Train);
    const auto test = to_samples(fx, Split::Test);
    for (auto cls : {ClassifierKind::EcocSvm, ClassifierKind::Knn, ClassifierKind::Cnn4}) {
      CAPTURE(classifier_name(cls));
      PipelineConfig cfg;
      cfg.classifier = cls;
      cfg.input_size = 32;
      cfg.dictionary_m = 16;
      cfg.bow.sift_grid = {16, 8};
      cfg.knn_k = 3;
      cfg.cnn.epochs = 1;
      cfg.seed = 5;
      const auto model = train_model(train, Task::Tooth, cfg);
      const auto container = model_to_container(model);
      const auto bytes = encode_container(container);
      const auto loaded = model_from_container(decode_container(bytes));
      CHECK(predict(loaded, test) == predict(model, test));
      CHECK(encode_container(model_to_container(loaded)) == bytes);
    }
  }

  TEST_CASE("filter grid layout") {
    auto net = nn::build_4layer<float>({1, 16, 16}, 3, nn::Head::Softmax, {-0.05, 0.05, 1});
    CHECK(conv_layer_index(net, 1) == 0);
    CHECK(conv_layer_index(net, 2) == 2);
    CHECK(error_of([&] { conv_layer_index(net, 3); }) == Errc::LayerNotConvolutional);
    const auto tiles = filter_tiles(net, 0);
    REQUIRE(tiles.size() == 32);
    const auto grid = tile_grid(tiles, 8);
    // 32 tiles -> 6 columns, 6 rows of 24 px tiles with 1 px separators
    CHECK(grid.width() == 6 * 24 + 5);
    CHECK(grid.height() == 6 * 24 + 5);
    CHECK(grid.at(24, 0) == 1.0f);
    CHECK(grid.at(grid.width() - 1, grid.height() - 1) == 0.0f);  // unused cell
    CHECK(error_of([&] { filter_tiles(net, 1); }) == Errc::LayerNotConvolutional);
  }

  TEST_CASE("zero filters render mid-gray and identity kernels copy the input") {
    auto net = nn::make_network<float>({1, 6, 6}, {nn::Conv2d{2, 3, 3}});
    for (const auto& t : filter_tiles(net, 0))
      for (float v : t.pixels()) CHECK(v == 0.5f);
    net.params[0].weight[4] = 1.0f;  // centre tap of filter 0
    GrayImage img(6, 6);
    Rng rng(2);
    for (auto& v : img.pixels()) v = static_cast<float>(rng.uniform(0.2, 0.9));
    const auto acts = activation_tiles(net, 0, img);
    REQUIRE(acts.size() == 2);
    const auto expect = normalize_tile(6, 6, img.pixels());
    for (std::size_t i = 0; i < 36; ++i) CHECK(acts[0].pixels()[i] == doctest::Approx(expect.pixels()[i]));
    for (float v : acts[1].pixels()) CHECK(v == 0.5f);
  }

  TEST_CASE("HOG glyphs") {
    const auto flat = render_hog_glyphs(GrayImage(32, 24, 0.3f), 8, 1);
    CHECK(flat.width() == 32);
    CHECK(flat.height() == 24);
    for (float v : flat.pixels()) CHECK(v == 0.0f);

    GrayImage stripes(32, 32);
    for (std::size_t y = 0; y < 32; ++y)
      for (std::size_t x = 0; x < 32; ++x) stripes.at(x, y) = (x / 4) % 2 ? 1.0f : 0.0f;
    const auto g = render_hog_glyphs(stripes, 8, 2);
    CHECK(g.width() == 64);
    // bin 0 (horizontal gradient) draws a horizontal line through each tile centre
    float row_mid = 0, col_mid = 0;
    for (std::size_t i = 0; i < 16; ++i) {
      row_mid += g.at(i, 8);
      col_mid += g.at(8, i);
    }
    CHECK(row_mid > col_mid);
  }

  TEST_CASE("label colors are deterministic and distinct") {
    LabelMap m{4, 1, {0, 1, 2, 1}, 3};
    const auto a = colorize_labels(m), b = colorize_labels(m);
    CHECK(a == b);
    CHECK(std::equal(a.at(1, 0), a.at(1, 0) + 3, a.at(3, 0)));
    CHECK_FALSE(std::equal(a.at(0, 0), a.at(0, 0) + 3, a.at(1, 0)));
    CHECK_FALSE(std::equal(a.at(1, 0), a.at(1, 0) + 3, a.at(2, 0)));
  }

  TEST_CASE("glyph fixture layout") {
    const auto fx = glyph_dataset(7, 5, 3, 64);
    CHECK(fx.size() == 10 * 8);
    std::map<std::uint32_t, std::pair<int, int>> per_class;
    std::set<std::string> train_p, test_p, paths;
    for (const auto& f : fx) {
      CHECK(f.image.width() == 64);
      auto& c = per_class[f.record.class_index()];
      (f.record.split == Split::Train ? c.first : c.second)++;
      (f.record.split == Split::Train ? train_p : test_p).insert(f.record.patient_id);
      paths.insert(f.record.path);
    }
    CHECK(per_class.size() == 10);
    for (const auto& [k, c] : per_class) {
      CHECK(k < 10);
      CHECK(c.first == 5);
      CHECK(c.second == 3);
    }
    for (const auto& p : test_p) CHECK(train_p.count(p) == 0);
    CHECK(paths.size() == fx.size());
    const auto again = glyph_dataset(7, 5, 3, 64);
    CHECK(again[17].image == fx[17].image);
  }

  TEST_CASE("glyph shapes differ") {
    std::vector<GrayImage> shapes;
    for (std::size_t s = 0; s < kGlyphShapes; ++s) shapes.push_back(render_glyph(s, 32, {}));
    for (std::size_t a = 0; a < kGlyphShapes; ++a)
      for (std::size_t b = a + 1; b < kGlyphShapes; ++b) CHECK_FALSE(shapes[a] == shapes[b]);
    CHECK_THROWS_AS(render_glyph(kGlyphShapes, 32, {}), Error);
  }

  TEST_CASE("sex fixture and record helpers") {
    const auto fx = sex_dataset(1, 4, 2, 32);
    CHECK(fx.size() == 12);
    for (const auto& f : fx) CHECK(f.record.sex().has_value());
    const auto recs = tooth_records(3);
    CHECK(recs.size() == 84);
    const auto two = two_block_image(10, 4);
    CHECK(two.at(4, 0) == 0.0f);
    CHECK(two.at(5, 3) == 1.0f);
  }

  TEST_CASE("fixtures write a readable manifest") {
    const auto dir = std::filesystem::temp_directory_path() / "dentvis_unit_fixture";
    std::filesystem::remove_all(dir);
    const auto fx = glyph_dataset(2, 2, 1, 32);
    write_fixture(dir, fx);
    const auto m = read_manifest(dir / "manifest.csv");
    REQUIRE(m.records.size() == fx.size());
    PipelineConfig cfg;
    cfg.input_size = 32;
    const auto samples = load_samples(m, m.records, cfg);
    CHECK(samples[3].image.gray == fx[3].image);
    std::filesystem::remove_all(dir);
  }
}
