#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace dentvis::app {

inline constexpr int kSchemaVersion = 1;

struct NamedTensor {
  std::string name;
  std::vector<std::size_t> shape;
  std::vector<float> data;
};

/// "PNC1", u32 LE header length, compact JSON header with sorted keys, then
/// every declared tensor as little-endian f32 in header order.
struct ModelContainer {
  std::string module;
  std::uint64_t seed = 0;
  nlohmann::json hyperparameters = nlohmann::json::object();
  nlohmann::json meta = nlohmann::json::object();
  std::vector<NamedTensor> tensors;

  const NamedTensor& tensor(std::string_view name) const;
};

std::vector<std::uint8_t> encode_container(const ModelContainer& c);
/// Throws MalformedHeader or TruncatedPayload.
ModelContainer decode_container(std::span<const std::uint8_t> bytes);

void save_container(const std::filesystem::path& path, const ModelContainer& c);
ModelContainer load_container(const std::filesystem::path& path);

}  // namespace dentvis::app
