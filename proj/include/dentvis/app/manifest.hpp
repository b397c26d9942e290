#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "dentvis/eval/labels.hpp"

namespace dentvis::app {

enum class Task { Tooth, Sex };

std::string_view task_name(Task t) noexcept;
Task parse_task(std::string_view name);

/// Class name as written in reports: FDI text for teeth, M/F for sex.
std::string class_label(Task t, std::uint32_t class_index);

struct Manifest {
  Task task = Task::Tooth;
  std::vector<SampleRecord> records;
  std::filesystem::path base_dir;  // relative record paths resolve against this

  std::filesystem::path resolve(const SampleRecord& r) const;
  /// Records whose split matches.
  std::vector<SampleRecord> with_split(Split s) const;
};

/// Header must be exactly path,label,patient_id,split. Paths must be unique and
/// every label must belong to the same task. An empty manifest is allowed
/// here; commands reject it.
Manifest parse_manifest(std::string_view csv, const std::filesystem::path& base_dir);
Manifest read_manifest(const std::filesystem::path& path);
std::string format_manifest(const Manifest& m);

}  // namespace dentvis::app
