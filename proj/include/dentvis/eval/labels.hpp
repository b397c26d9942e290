#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace dentvis {

inline constexpr std::uint32_t kToothClasses = 28;

/// Two-digit FDI tooth notation: quadrant 1-4, position 1-7.
struct FdiLabel {
  int quadrant = 1;
  int position = 1;

  /// (quadrant - 1) * 7 + (position - 1)
  std::uint32_t class_index() const noexcept { return static_cast<std::uint32_t>((quadrant - 1) * 7 + (position - 1)); }
  std::string text() const;
  static FdiLabel from_class(std::uint32_t index);

  friend bool operator==(const FdiLabel&, const FdiLabel&) = default;
};

/// Throws BadDigit for anything but two digits in range and
/// ThirdMolarExcluded for position 8.
FdiLabel parse_fdi(std::string_view text);

enum class Sex { Male, Female };

/// "M"/"F" (case-insensitive); throws BadDigit otherwise.
Sex parse_sex(std::string_view text);
std::string_view sex_text(Sex s) noexcept;

enum class Split { Train, Test, Unassigned };

Split parse_split(std::string_view text);
std::string_view split_text(Split s) noexcept;

using SampleLabel = std::variant<FdiLabel, Sex>;

struct SampleRecord {
  std::string path;
  SampleLabel label;
  std::string patient_id;
  Split split = Split::Unassigned;

  /// Tooth class or sex index (male 0, female 1).
  std::uint32_t class_index() const noexcept;
  std::optional<Sex> sex() const noexcept;
};

}  // namespace dentvis
