#include "dentvis/app/container.hpp"

#include <bit>
#include <cstring>

#include "dentvis/core/error.hpp"
#include "dentvis/imageio/codec.hpp"

namespace dentvis::app {

using nlohmann::json;

namespace {

constexpr char kMagic[4] = {'P', 'N', 'C', '1'};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  return std::uint32_t{p[0]} | std::uint32_t{p[1]} << 8 | std::uint32_t{p[2]} << 16 | std::uint32_t{p[3]} << 24;
}

std::size_t element_count(const std::vector<std::size_t>& shape) {
  std::size_t n = 1;
  for (auto d : shape) n *= d;
  return n;
}

}  // namespace

const NamedTensor& ModelContainer::tensor(std::string_view name) const {
  for (const auto& t : tensors)
    if (t.name == name) return t;
  fail(Errc::MalformedHeader, "container has no tensor '" + std::string(name) + "'");
}

std::vector<std::uint8_t> encode_container(const ModelContainer& c) {
  json header;
  header["schema_version"] = kSchemaVersion;
  header["module"] = c.module;
  header["seed"] = c.seed;
  header["hyperparameters"] = c.hyperparameters;
  header["meta"] = c.meta;
  json list = json::array();
  for (const auto& t : c.tensors) {
    require(t.data.size() == element_count(t.shape), Errc::ShapeMismatch, "tensor '" + t.name + "' size mismatch");
    list.push_back({{"name", t.name}, {"shape", t.shape}});
  }
  header["tensors"] = std::move(list);
  const std::string text = header.dump();

  std::vector<std::uint8_t> out(kMagic, kMagic + 4);
  put_u32(out, static_cast<std::uint32_t>(text.size()));
  out.insert(out.end(), text.begin(), text.end());
  for (const auto& t : c.tensors)
    for (float v : t.data) put_u32(out, std::bit_cast<std::uint32_t>(v));
  return out;
}

ModelContainer decode_container(std::span<const std::uint8_t> bytes) {
  require(bytes.size() >= 8 && std::memcmp(bytes.data(), kMagic, 4) == 0, Errc::MalformedHeader,
          "missing PNC1 magic");
  const std::uint32_t len = get_u32(bytes.data() + 4);
  require(bytes.size() >= 8 + static_cast<std::size_t>(len), Errc::TruncatedPayload, "container header truncated");
  json header;
  try {
    header = json::parse(bytes.begin() + 8, bytes.begin() + 8 + len);
  } catch (const json::exception& e) {
    fail(Errc::MalformedHeader, std::string("container header: ") + e.what());
  }
  ModelContainer c;
  std::size_t pos = 8 + len;
  try {
    require(header.at("schema_version").get<int>() == kSchemaVersion, Errc::MalformedHeader,
            "unsupported container schema version");
    c.module = header.at("module").get<std::string>();
    c.seed = header.at("seed").get<std::uint64_t>();
    c.hyperparameters = header.at("hyperparameters");
    c.meta = header.at("meta");
    for (const auto& t : header.at("tensors")) {
      NamedTensor nt;
      nt.name = t.at("name").get<std::string>();
      nt.shape = t.at("shape").get<std::vector<std::size_t>>();
      const std::size_t n = element_count(nt.shape);
      require(bytes.size() - pos >= 4 * n, Errc::TruncatedPayload, "payload ends inside tensor '" + nt.name + "'");
      nt.data.resize(n);
      for (std::size_t i = 0; i < n; ++i, pos += 4) nt.data[i] = std::bit_cast<float>(get_u32(bytes.data() + pos));
      c.tensors.push_back(std::move(nt));
    }
  } catch (const json::exception& e) {
    fail(Errc::MalformedHeader, std::string("container header: ") + e.what());
  }
  require(pos == bytes.size(), Errc::MalformedHeader, "trailing bytes after container payload");
  return c;
}

void save_container(const std::filesystem::path& path, const ModelContainer& c) {
  write_file(path, encode_container(c));
}

ModelContainer load_container(const std::filesystem::path& path) { return decode_container(read_file(path)); }

}  // namespace dentvis::app
