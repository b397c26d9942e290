#include "dentvis/core/error.hpp"

namespace dentvis {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::MalformedHeader: return "MalformedHeader";
    case Errc::UnsupportedBitDepth: return "UnsupportedBitDepth";
    case Errc::TruncatedPayload: return "TruncatedPayload";
    case Errc::ZeroDimension: return "ZeroDimension";
    case Errc::OutOfBounds: return "OutOfBounds";
    case Errc::ImageTooSmall: return "ImageTooSmall";
    case Errc::PatchLargerThanImage: return "PatchLargerThanImage";
    case Errc::EmptyGridList: return "EmptyGridList";
    case Errc::NoDescriptors: return "NoDescriptors";
    case Errc::DegenerateData: return "DegenerateData";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::CenterOutOfRange: return "CenterOutOfRange";
    case Errc::SingleClassInput: return "SingleClassInput";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::ClassTooSmall: return "ClassTooSmall";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::InputTooSmall: return "InputTooSmall";
    case Errc::InputNotDivisible: return "InputNotDivisible";
    case Errc::LabelOutOfRange: return "LabelOutOfRange";
    case Errc::BadDigit: return "BadDigit";
    case Errc::ThirdMolarExcluded: return "ThirdMolarExcluded";
    case Errc::TooFewPatients: return "TooFewPatients";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::NegativeCount: return "NegativeCount";
    case Errc::EmptyManifest: return "EmptyManifest";
    case Errc::TaskMismatch: return "TaskMismatch";
    case Errc::LayerNotConvolutional: return "LayerNotConvolutional";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::ConfigError: return "ConfigError";
    case Errc::Io: return "Io";
    case Errc::NumericFailure: return "NumericFailure";
  }
  return "Unknown";
}

ErrorFamily errc_family(Errc code) noexcept {
  switch (code) {
    case Errc::ConfigError:
    case Errc::InvalidArgument:
    case Errc::TaskMismatch:
    case Errc::LayerNotConvolutional:
    case Errc::EmptyGridList:
      return ErrorFamily::Config;
    case Errc::NoConvergence:
    case Errc::NumericFailure:
      return ErrorFamily::Numeric;
    default:
      return ErrorFamily::Data;
  }
}

}  // namespace dentvis
