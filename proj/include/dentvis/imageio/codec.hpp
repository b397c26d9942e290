#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <variant>
#include <vector>

#include "dentvis/imageio/image.hpp"

namespace dentvis {

using AnyImage = std::variant<GrayImage, RgbImage>;

/// Decodes binary PGM (P5), PPM (P6) with maxval 255, or 8-bit PNG.
/// Samples map to v / 255.
AnyImage decode(std::span<const std::uint8_t> bytes);

AnyImage read_image(const std::filesystem::path& path);
/// Reads any supported file and converts color input to luma.
GrayImage read_gray(const std::filesystem::path& path);
/// Reads any supported file and promotes gray input to three equal channels.
RgbImage read_rgb(const std::filesystem::path& path);

// Encoders quantize with round(v * 255).
std::vector<std::uint8_t> encode_pgm(const GrayImage& img);
std::vector<std::uint8_t> encode_ppm(const RgbImage& img);
std::vector<std::uint8_t> encode_png(const GrayImage& img);
std::vector<std::uint8_t> encode_png(const RgbImage& img);

/// Chooses the encoder from the extension (.pgm, .ppm, .png).
void write_image(const std::filesystem::path& path, const GrayImage& img);
void write_image(const std::filesystem::path& path, const RgbImage& img);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace dentvis
