#include "svaa/error.hpp"

namespace svaa {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MalformedLine: return "MalformedLine";
    case ErrorCode::InvalidBBox: return "InvalidBBox";
    case ErrorCode::InvalidTimestamp: return "InvalidTimestamp";
    case ErrorCode::InvertedRange: return "InvertedRange";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::StoreUnwritable: return "StoreUnwritable";
    case ErrorCode::StoreMissing: return "StoreMissing";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::UnknownCamera: return "UnknownCamera";
    case ErrorCode::UnknownLocation: return "UnknownLocation";
    case ErrorCode::EmptyHistory: return "EmptyHistory";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::CameraMismatch: return "CameraMismatch";
    case ErrorCode::InvalidProfile: return "InvalidProfile";
  }
  return "Unknown";
}

}  // namespace svaa
