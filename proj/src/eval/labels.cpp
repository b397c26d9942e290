#include "dentvis/eval/labels.hpp"

#include <cctype>

#include "dentvis/core/error.hpp"

namespace dentvis {

std::string FdiLabel::text() const { return std::to_string(quadrant) + std::to_string(position); }

FdiLabel FdiLabel::from_class(std::uint32_t index) {
  require(index < kToothClasses, Errc::IndexOutOfRange, "tooth class " + std::to_string(index) + " out of range");
  return FdiLabel{static_cast<int>(index / 7) + 1, static_cast<int>(index % 7) + 1};
}

FdiLabel parse_fdi(std::string_view text) {
  require(text.size() == 2 && std::isdigit(static_cast<unsigned char>(text[0])) &&
              std::isdigit(static_cast<unsigned char>(text[1])),
          Errc::BadDigit, "FDI label must be two digits, got '" + std::string(text) + "'");
  const int q = text[0] - '0', p = text[1] - '0';
  require(q >= 1 && q <= 4, Errc::BadDigit, "FDI quadrant must be 1-4, got '" + std::string(text) + "'");
  require(p != 8, Errc::ThirdMolarExcluded, "third molar " + std::string(text) + " is excluded");
  require(p >= 1 && p <= 7, Errc::BadDigit, "FDI position must be 1-7, got '" + std::string(text) + "'");
  return FdiLabel{q, p};
}

Sex parse_sex(std::string_view text) {
  if (text.size() == 1) {
    const char c = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
    if (c == 'M') return Sex::Male;
    if (c == 'F') return Sex::Female;
  }
  fail(Errc::BadDigit, "sex label must be M or F, got '" + std::string(text) + "'");
}

std::string_view sex_text(Sex s) noexcept { return s == Sex::Male ? "M" : "F"; }

Split parse_split(std::string_view text) {
  if (text == "train") return Split::Train;
  if (text == "test") return Split::Test;
  if (text.empty() || text == "unassigned") return Split::Unassigned;
  fail(Errc::ConfigError, "split must be train, test or unassigned, got '" + std::string(text) + "'");
}

std::string_view split_text(Split s) noexcept {
  switch (s) {
    case Split::Train:
      return "train";
    case Split::Test:
      return "test";
    case Split::Unassigned:
      break;
  }
  return "unassigned";
}

std::uint32_t SampleRecord::class_index() const noexcept {
  if (const auto* f = std::get_if<FdiLabel>(&label)) return f->class_index();
  return std::get<Sex>(label) == Sex::Male ? 0u : 1u;
}

std::optional<Sex> SampleRecord::sex() const noexcept {
  if (const auto* s = std::get_if<Sex>(&label)) return *s;
  return std::nullopt;
}

}  // namespace dentvis
