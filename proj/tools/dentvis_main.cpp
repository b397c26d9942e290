#include <iostream>

#include <CLI11.hpp>

#include "dentvis/app/commands.hpp"
#include "dentvis/core/parallel.hpp"

using dentvis::app::CommandOptions;

int main(int argc, char** argv) {
  CLI::App app{"Dental radiograph classification toolkit"};
  app.require_subcommand(1);
  CommandOptions o;
  std::size_t threads = 0;
  std::uint64_t seed = 0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "JSON pipeline configuration");
    sub->add_option("--out", o.out, "Output directory");
    sub->add_option("--seed", seed, "Random seed (overrides the config)");
    sub->add_option("--threads", threads, "Worker threads (DENTVIS_THREADS overrides)");
  };

  auto* extract = app.add_subcommand("extract", "Extract descriptors for every manifest image");
  auto* train = app.add_subcommand("train", "Train a model on the manifest's train split");
  auto* eval = app.add_subcommand("eval", "Evaluate a model, or run k-fold cross-validation");
  auto* sweep = app.add_subcommand("sweep", "Accuracy curve over one configuration axis");
  auto* viz_hog = app.add_subcommand("viz-hog", "Render HOG glyphs for an image");
  auto* viz_filters = app.add_subcommand("viz-filters", "Render CNN filters or activations");
  auto* segment = app.add_subcommand("segment", "Graph-based segmentation of an image");
  auto* fixtures = app.add_subcommand("fixtures", "Generate synthetic datasets");

  for (auto* sub : {extract, train, eval, sweep, viz_hog, viz_filters, segment, fixtures}) common(sub);
  for (auto* sub : {extract, train, eval, sweep}) sub->add_option("--manifest", o.manifest, "CSV manifest")->required();
  eval->add_option("--model", o.model, "Model container");
  eval->add_option("--kfold", o.kfold, "Patient-level k-fold cross-validation");
  sweep->add_option("--axis", o.axis, "dictionary_m, input_size, pyramid_levels or train_size")->required();
  sweep->add_option("--values", o.values, "Axis values")->required()->delimiter(',');
  sweep->add_option("--classifiers", o.classifiers, "Classifiers to compare")->delimiter(',');
  for (auto* sub : {viz_hog, segment}) sub->add_option("--image", o.image, "Input image")->required();
  viz_filters->add_option("--model", o.model, "CNN model container")->required();
  viz_filters->add_option("--layer", o.layer, "Convolution layer (1 or 2)")->check(CLI::Range(1, 2));
  viz_filters->add_option("--input", o.image, "Show activations for this image");
  std::string action;
  fixtures->add_option("action", action, "generate")->required()->check(CLI::IsMember({"generate"}));
  fixtures->add_option("--kind", o.fixture_kind, "glyphs, sex or blocks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  auto* sub = app.get_subcommands().front();
  if (sub->count("--seed")) o.seed = seed;
  if (threads > 0) dentvis::set_thread_count(threads);

  try {
    const std::string name = sub->get_name();
    if (name == "extract") dentvis::app::cmd_extract(o, std::cout);
    if (name == "train") dentvis::app::cmd_train(o, std::cout);
    if (name == "eval") dentvis::app::cmd_eval(o, std::cout);
    if (name == "sweep") dentvis::app::cmd_sweep(o, std::cout);
    if (name == "viz-hog") dentvis::app::cmd_viz_hog(o, std::cout);
    if (name == "viz-filters") dentvis::app::cmd_viz_filters(o, std::cout);
    if (name == "segment") dentvis::app::cmd_segment(o, std::cout);
    if (name == "fixtures") dentvis::app::cmd_fixtures(o, std::cout);
  } catch (const dentvis::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return dentvis::app::exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
