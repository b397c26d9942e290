#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dentvis {

enum class Errc {
  // image decoding / geometry
  MalformedHeader,
  UnsupportedBitDepth,
  TruncatedPayload,
  ZeroDimension,
  OutOfBounds,
  ImageTooSmall,
  // descriptors and dictionaries
  PatchLargerThanImage,
  EmptyGridList,
  NoDescriptors,
  DegenerateData,
  DimensionMismatch,
  CenterOutOfRange,
  // classifiers
  SingleClassInput,
  NoConvergence,
  ClassTooSmall,
  // networks
  ShapeMismatch,
  InputTooSmall,
  InputNotDivisible,
  LabelOutOfRange,
  // evaluation
  BadDigit,
  ThirdMolarExcluded,
  TooFewPatients,
  IndexOutOfRange,
  NegativeCount,
  // orchestration
  EmptyManifest,
  TaskMismatch,
  LayerNotConvolutional,
  InvalidArgument,
  ConfigError,
  Io,
  NumericFailure,
};

std::string_view errc_name(Errc code) noexcept;

/// Coarse error family used for process exit codes.
enum class ErrorFamily { Config = 2, Data = 3, Numeric = 4 };

ErrorFamily errc_family(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }
  ErrorFamily family() const noexcept { return errc_family(code_); }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, Errc code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace dentvis
