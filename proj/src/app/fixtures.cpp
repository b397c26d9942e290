#include "dentvis/app/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include "dentvis/app/manifest.hpp"
#include "dentvis/core/error.hpp"
#include "dentvis/core/rng.hpp"
#include "dentvis/imageio/codec.hpp"

namespace dentvis::app {

namespace {

struct Vec {
  double x, y;
};

double seg_dist(Vec p, Vec a, Vec b) {
  const double vx = b.x - a.x, vy = b.y - a.y;
  const double len2 = vx * vx + vy * vy;
  double t = len2 > 0 ? ((p.x - a.x) * vx + (p.y - a.y) * vy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.x - a.x - t * vx, p.y - a.y - t * vy);
}

double polygon_dist(Vec p, const std::vector<Vec>& pts) {
  double d = 1e30;
  for (std::size_t i = 0; i < pts.size(); ++i) d = std::min(d, seg_dist(p, pts[i], pts[(i + 1) % pts.size()]));
  return d;
}

// Distance from p (glyph frame, unit radius) to the stroke skeleton of a
// shape; negative values mean "inside a filled region".
double shape_distance(std::size_t shape, Vec p) {
  switch (shape) {
    case 0:  // ring
      return std::abs(std::hypot(p.x, p.y) - 0.8);
    case 1:  // plus
      return std::min(seg_dist(p, {-1, 0}, {1, 0}), seg_dist(p, {0, -1}, {0, 1}));
    case 2:  // cross
      return std::min(seg_dist(p, {-0.75, -0.75}, {0.75, 0.75}), seg_dist(p, {-0.75, 0.75}, {0.75, -0.75}));
    case 3:  // square
      return polygon_dist(p, {{-0.75, -0.75}, {0.75, -0.75}, {0.75, 0.75}, {-0.75, 0.75}});
    case 4:  // triangle
      return polygon_dist(p, {{0, -0.9}, {0.85, 0.65}, {-0.85, 0.65}});
    case 5:  // horizontal bars
      return std::min({seg_dist(p, {-0.8, -0.6}, {0.8, -0.6}), seg_dist(p, {-0.8, 0}, {0.8, 0}),
                       seg_dist(p, {-0.8, 0.6}, {0.8, 0.6})});
    case 6:  // vertical bars
      return std::min({seg_dist(p, {-0.6, -0.8}, {-0.6, 0.8}), seg_dist(p, {0, -0.8}, {0, 0.8}),
                       seg_dist(p, {0.6, -0.8}, {0.6, 0.8})});
    case 7:  // disk
      return std::hypot(p.x, p.y) - 0.6;
    case 8:  // tee
      return std::min(seg_dist(p, {-0.8, -0.7}, {0.8, -0.7}), seg_dist(p, {0, -0.7}, {0, 0.9}));
    default:  // diamond
      return polygon_dist(p, {{0, -0.9}, {0.9, 0}, {0, 0.9}, {-0.9, 0}});
  }
}

float clamp01(double v) { return static_cast<float>(std::clamp(v, 0.0, 1.0)); }

std::string class_text(std::uint32_t c) { return FdiLabel::from_class(c).text(); }

GlyphStyle jittered_style(Rng& rng, double radius_lo, double radius_hi) {
  GlyphStyle s;
  s.cx = rng.uniform(0.42, 0.58);
  s.cy = rng.uniform(0.42, 0.58);
  s.radius = rng.uniform(radius_lo, radius_hi);
  s.angle = rng.uniform(-0.2, 0.2);
  s.stroke = rng.uniform(0.035, 0.06);
  s.foreground = static_cast<float>(rng.uniform(0.7, 1.0));
  s.background = static_cast<float>(rng.uniform(0.0, 0.25));
  return s;
}

// Noise is followed by 8-bit quantization so the in-memory fixture equals its
// PNG round-trip.
void add_noise(GrayImage& img, Rng& rng, double sigma) {
  for (auto& v : img.pixels()) {
    const double noisy = clamp01(v + sigma * rng.normal());
    v = static_cast<float>(std::lround(noisy * 255.0)) / 255.0f;
  }
}

}  // namespace

GrayImage render_glyph(std::size_t shape, std::size_t size, const GlyphStyle& style) {
  require(shape < kGlyphShapes, Errc::InvalidArgument, "unknown glyph shape");
  require(size >= 8, Errc::InvalidArgument, "glyph canvas must be >= 8 pixels");
  GrayImage img(size, size, style.background);
  const double n = static_cast<double>(size);
  const double r = style.radius * n, half_stroke = 0.5 * style.stroke * n;
  const double ca = std::cos(style.angle), sa = std::sin(style.angle);
  for (std::size_t y = 0; y < size; ++y) {
    for (std::size_t x = 0; x < size; ++x) {
      const double dx = (static_cast<double>(x) + 0.5 - style.cx * n) / r;
      const double dy = (static_cast<double>(y) + 0.5 - style.cy * n) / r;
      const Vec p{ca * dx + sa * dy, -sa * dx + ca * dy};
      const double d = shape_distance(shape, p) * r;  // pixels
      const double edge = shape == 7 ? d : d - half_stroke;
      const double cover = std::clamp(0.5 - edge, 0.0, 1.0);
      img.at(x, y) = clamp01(style.background + cover * (style.foreground - style.background));
    }
  }
  return img;
}

std::vector<FixtureImage> glyph_dataset(std::uint64_t seed, std::size_t train_per_class, std::size_t test_per_class,
                                        std::size_t size) {
  std::vector<FixtureImage> out;
  const std::size_t per_class = train_per_class + test_per_class;
  for (std::size_t i = 0; i < per_class; ++i) {
    for (std::uint32_t c = 0; c < kGlyphShapes; ++c) {
      Rng rng(Rng::mix(seed, c, i));
      GrayImage img = render_glyph(c, size, jittered_style(rng, 0.26, 0.36));
      add_noise(img, rng, 0.04);
      FixtureImage f;
      f.image = std::move(img);
      char name[64];
      std::snprintf(name, sizeof name, "images/c%02u_%03zu.png", c, i);
      f.record.path = name;
      f.record.label = FdiLabel::from_class(c);
      std::snprintf(name, sizeof name, "p%03zu", i);
      f.record.patient_id = name;
      f.record.split = i < train_per_class ? Split::Train : Split::Test;
      out.push_back(std::move(f));
    }
  }
  return out;
}

std::vector<FixtureImage> sex_dataset(std::uint64_t seed, std::size_t train_per_class, std::size_t test_per_class,
                                      std::size_t size) {
  std::vector<FixtureImage> out;
  const std::size_t per_class = train_per_class + test_per_class;
  for (std::size_t i = 0; i < per_class; ++i) {
    for (std::uint32_t c = 0; c < 2; ++c) {
      Rng rng(Rng::mix(seed ^ 0x5e7u, c, i));
      const bool train = i < train_per_class;
      GlyphStyle style = jittered_style(rng, 0.27, 0.27);
      if (!train) style.radius *= rng.uniform(0.75, 1.25);
      GrayImage img = render_glyph(c == 0 ? 3 : 0, size, style);
      add_noise(img, rng, 0.05);
      FixtureImage f;
      f.image = std::move(img);
      char name[64];
      std::snprintf(name, sizeof name, "images/%c_%03zu.png", c == 0 ? 'm' : 'f', i);
      f.record.path = name;
      f.record.label = c == 0 ? Sex::Male : Sex::Female;
      std::snprintf(name, sizeof name, "%c%03zu", c == 0 ? 'm' : 'f', i);
      f.record.patient_id = name;
      f.record.split = train ? Split::Train : Split::Test;
      out.push_back(std::move(f));
    }
  }
  return out;
}

std::vector<SampleRecord> tooth_records(std::size_t patients, std::size_t images_per_patient) {
  require(images_per_patient >= 1 && images_per_patient <= kToothClasses, Errc::InvalidArgument,
          "images_per_patient must be 1..28");
  std::vector<SampleRecord> out;
  for (std::size_t p = 0; p < patients; ++p) {
    char id[32];
    std::snprintf(id, sizeof id, "p%04zu", p);
    for (std::uint32_t c = 0; c < images_per_patient; ++c) {
      SampleRecord r;
      r.path = std::string(id) + "/" + class_text(c) + ".png";
      r.label = FdiLabel::from_class(c);
      r.patient_id = id;
      out.push_back(std::move(r));
    }
  }
  return out;
}

GrayImage two_block_image(std::size_t width, std::size_t height) {
  GrayImage img(width, height, 0.0f);
  for (std::size_t y = 0; y < height; ++y)
    for (std::size_t x = width / 2; x < width; ++x) img.at(x, y) = 1.0f;
  return img;
}

void write_fixture(const std::filesystem::path& dir, const std::vector<FixtureImage>& images) {
  Manifest m;
  m.base_dir = dir;
  for (const auto& f : images) {
    const auto path = dir / f.record.path;
    std::filesystem::create_directories(path.parent_path());
    write_image(path, f.image);
    m.records.push_back(f.record);
    if (std::holds_alternative<Sex>(f.record.label)) m.task = Task::Sex;
  }
  std::ofstream out(dir / "manifest.csv", std::ios::binary);
  require(static_cast<bool>(out), Errc::Io, "cannot write manifest in " + dir.string());
  out << format_manifest(m);
}

}  // namespace dentvis::app
