#include "dentvis/imageio/codec.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "dentvis/core/error.hpp"
#include "dentvis/imageio/transform.hpp"

namespace dentvis {
namespace {

std::uint8_t quantize(float v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0f, 1.0f) * 255.0f));
}

// Netpbm header scanner: whitespace separated ASCII integers, '#' comments.
class PnmHeader {
 public:
  explicit PnmHeader(std::span<const std::uint8_t> bytes) : bytes_(bytes), pos_(2) {}

  std::size_t next_uint() {
    skip_space_and_comments();
    std::size_t v = 0;
    std::size_t digits = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      v = v * 10 + (bytes_[pos_] - '0');
      require(v < (std::size_t{1} << 31), Errc::MalformedHeader, "header value too large");
      ++pos_;
      ++digits;
    }
    require(digits > 0, Errc::MalformedHeader, "expected an integer in PNM header");
    return v;
  }

  /// Exactly one whitespace byte separates maxval from the raster.
  std::size_t payload_offset() {
    require(pos_ < bytes_.size() && std::isspace(bytes_[pos_]), Errc::MalformedHeader,
            "missing separator before PNM payload");
    return pos_ + 1;
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_;
};

AnyImage decode_pnm(std::span<const std::uint8_t> bytes, int channels) {
  PnmHeader header(bytes);
  const std::size_t w = header.next_uint();
  const std::size_t h = header.next_uint();
  const std::size_t maxval = header.next_uint();
  require(w > 0 && h > 0, Errc::MalformedHeader, "PNM dimensions must be positive");
  require(maxval > 0, Errc::MalformedHeader, "PNM maxval must be positive");
  require(maxval == 255, Errc::UnsupportedBitDepth, "only 8-bit (maxval 255) PNM is supported");
  const std::size_t offset = header.payload_offset();
  const std::size_t need = w * h * static_cast<std::size_t>(channels);
  require(bytes.size() >= offset + need, Errc::TruncatedPayload, "PNM payload shorter than header declares");

  std::vector<float> data(need);
  for (std::size_t i = 0; i < need; ++i) data[i] = static_cast<float>(bytes[offset + i]) / 255.0f;
  if (channels == 1) return GrayImage(w, h, std::move(data));
  return RgbImage(w, h, std::move(data));
}

AnyImage decode_png(std::span<const std::uint8_t> bytes) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size()))
    fail(Errc::MalformedHeader, std::string("PNG header: ") + image.message);

  if (image.format & PNG_FORMAT_FLAG_LINEAR) {
    png_image_free(&image);
    fail(Errc::UnsupportedBitDepth, "only 8-bit PNG is supported");
  }
  const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
  image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  const std::size_t channels = color ? 3 : 1;
  const std::size_t w = image.width;
  const std::size_t h = image.height;
  std::vector<std::uint8_t> raw(PNG_IMAGE_SIZE(image), 0);
  if (!png_image_finish_read(&image, nullptr, raw.data(), 0, nullptr)) {
    std::string msg = image.message;
    png_image_free(&image);
    fail(Errc::TruncatedPayload, "PNG payload: " + msg);
  }
  std::vector<float> data(w * h * channels);
  for (std::size_t i = 0; i < data.size(); ++i) data[i] = static_cast<float>(raw[i]) / 255.0f;
  if (color) return RgbImage(w, h, std::move(data));
  return GrayImage(w, h, std::move(data));
}

std::vector<std::uint8_t> pnm_bytes(const char* magic, std::size_t w, std::size_t h,
                                    std::span<const float> samples) {
  const std::string header = std::string(magic) + "\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(header.size() + samples.size());
  for (float v : samples) out.push_back(quantize(v));
  return out;
}

std::vector<std::uint8_t> png_bytes(std::size_t w, std::size_t h, bool color, std::span<const float> samples) {
  std::vector<std::uint8_t> raw(samples.size());
  std::transform(samples.begin(), samples.end(), raw.begin(), quantize);

  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(w);
  image.height = static_cast<png_uint_32>(h);
  image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;

  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&image, nullptr, &size, 0, raw.data(), 0, nullptr))
    fail(Errc::Io, std::string("PNG encode: ") + image.message);
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&image, out.data(), &size, 0, raw.data(), 0, nullptr))
    fail(Errc::Io, std::string("PNG encode: ") + image.message);
  out.resize(size);
  return out;
}

std::string lower_ext(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext;
}

}  // namespace

AnyImage decode(std::span<const std::uint8_t> bytes) {
  require(bytes.size() >= 2, Errc::MalformedHeader, "input too short to identify format");
  if (bytes[0] == 'P' && bytes[1] == '5') return decode_pnm(bytes, 1);
  if (bytes[0] == 'P' && bytes[1] == '6') return decode_pnm(bytes, 3);
  if (bytes.size() >= 8 && png_sig_cmp(bytes.data(), 0, 8) == 0) return decode_png(bytes);
  fail(Errc::MalformedHeader, "unrecognized image format (expected P5, P6 or PNG)");
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), Errc::Io, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), Errc::Io, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  require(static_cast<bool>(out), Errc::Io, "short write to " + path.string());
}

AnyImage read_image(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  return decode(bytes);
}

GrayImage read_gray(const std::filesystem::path& path) {
  auto img = read_image(path);
  if (auto* gray = std::get_if<GrayImage>(&img)) return std::move(*gray);
  return to_gray(std::get<RgbImage>(img));
}

RgbImage read_rgb(const std::filesystem::path& path) {
  auto img = read_image(path);
  if (auto* rgb = std::get_if<RgbImage>(&img)) return std::move(*rgb);
  return to_rgb(std::get<GrayImage>(img));
}

std::vector<std::uint8_t> encode_pgm(const GrayImage& img) {
  return pnm_bytes("P5", img.width(), img.height(), img.pixels());
}

std::vector<std::uint8_t> encode_ppm(const RgbImage& img) {
  return pnm_bytes("P6", img.width(), img.height(), img.samples());
}

std::vector<std::uint8_t> encode_png(const GrayImage& img) {
  return png_bytes(img.width(), img.height(), false, img.pixels());
}

std::vector<std::uint8_t> encode_png(const RgbImage& img) {
  return png_bytes(img.width(), img.height(), true, img.samples());
}

void write_image(const std::filesystem::path& path, const GrayImage& img) {
  const auto ext = lower_ext(path);
  if (ext == ".pgm") return write_file(path, encode_pgm(img));
  if (ext == ".png") return write_file(path, encode_png(img));
  fail(Errc::InvalidArgument, "unsupported gray output extension '" + ext + "'");
}

void write_image(const std::filesystem::path& path, const RgbImage& img) {
  const auto ext = lower_ext(path);
  if (ext == ".ppm") return write_file(path, encode_ppm(img));
  if (ext == ".png") return write_file(path, encode_png(img));
  fail(Errc::InvalidArgument, "unsupported color output extension '" + ext + "'");
}

}  // namespace dentvis
