#pragma once

#include <filesystem>
#include <vector>

#include "dentvis/eval/labels.hpp"
#include "dentvis/imageio/image.hpp"

namespace dentvis::app {

struct FixtureImage {
  GrayImage image;
  SampleRecord record;  // path is relative to the fixture directory
};

/// Number of glyph shapes available.
inline constexpr std::size_t kGlyphShapes = 10;

struct GlyphStyle {
  double cx = 0.5, cy = 0.5;  // center, fraction of the canvas
  double radius = 0.3;        // fraction of the canvas side
  double angle = 0.0;         // radians
  double stroke = 0.05;       // fraction of the canvas side
  float foreground = 1.0f;
  float background = 0.0f;
};

/// Anti-aliased rendering of one of the glyph shapes: ring, plus, cross,
/// square, triangle, horizontal bars, vertical bars, disk, tee, diamond.
GrayImage render_glyph(std::size_t shape, std::size_t size, const GlyphStyle& style);

/// Ten-class glyph set with jittered position, size, rotation, stroke,
/// contrast and noise. Labels are the FDI codes of classes 0-9 (11..17,
/// 21..23). Patient i owns sample i of every class, so train and test
/// never share a patient.
std::vector<FixtureImage> glyph_dataset(std::uint64_t seed, std::size_t train_per_class = 50,
                                        std::size_t test_per_class = 20, std::size_t size = 64);

/// Binary M/F task (ring vs square). Training glyphs are drawn at one scale;
/// test glyphs vary in scale by +-25 percent.
std::vector<FixtureImage> sex_dataset(std::uint64_t seed, std::size_t train_per_class = 100,
                                      std::size_t test_per_class = 50, std::size_t size = 32);

/// Records only (no pixels): `patients` patients each owning every one of
/// the 28 tooth classes, alternating sex by patient; paths are synthetic.
std::vector<SampleRecord> tooth_records(std::size_t patients, std::size_t images_per_patient = 28);

/// Left half 0, right half 1.
GrayImage two_block_image(std::size_t width, std::size_t height);

/// Writes every image as PNG under dir and a manifest.csv next to them.
void write_fixture(const std::filesystem::path& dir, const std::vector<FixtureImage>& images);

}  // namespace dentvis::app
