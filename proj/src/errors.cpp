#include "dct3d/errors.hpp"

namespace dct3d {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "invalid-argument";
    case ErrorKind::kUnsupportedSize: return "unsupported-size";
    case ErrorKind::kRange: return "range";
    case ErrorKind::kCorruptStream: return "corrupt-stream";
    case ErrorKind::kTruncatedStream: return "truncated-stream";
    case ErrorKind::kUnsupportedFormat: return "unsupported-format";
    case ErrorKind::kTruncatedInput: return "truncated-input";
    case ErrorKind::kDataRange: return "data-range";
    case ErrorKind::kIo: return "io";
  }
  return "unknown";
}

}  // namespace dct3d
