#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dentvis/app/config.hpp"

namespace dentvis::app {

struct CommandOptions {
  std::filesystem::path config;
  std::filesystem::path manifest;
  std::filesystem::path out = ".";
  std::filesystem::path model;
  std::filesystem::path image;
  std::optional<std::uint64_t> seed;
  std::size_t kfold = 0;
  std::string axis;                      // sweep
  std::vector<std::string> values;       // sweep
  std::vector<std::string> classifiers;  // sweep; default is the configured one
  std::size_t layer = 1;                 // viz-filters
  std::string fixture_kind = "glyphs";   // fixtures
};

/// Config file (or defaults) with the --seed override applied.
PipelineConfig resolve_config(const CommandOptions& o);

// Each command writes its artifacts under o.out, logs progress to `log` and
// throws dentvis::Error on failure.
void cmd_extract(const CommandOptions& o, std::ostream& log);
void cmd_train(const CommandOptions& o, std::ostream& log);
void cmd_eval(const CommandOptions& o, std::ostream& log);
void cmd_sweep(const CommandOptions& o, std::ostream& log);
void cmd_viz_hog(const CommandOptions& o, std::ostream& log);
void cmd_viz_filters(const CommandOptions& o, std::ostream& log);
void cmd_segment(const CommandOptions& o, std::ostream& log);
void cmd_fixtures(const CommandOptions& o, std::ostream& log);

/// 2 config, 3 data, 4 numeric.
int exit_code(const Error& e) noexcept;

}  // namespace dentvis::app
