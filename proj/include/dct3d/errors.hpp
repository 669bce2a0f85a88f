#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dct3d {

enum class ErrorKind {
  kInvalidArgument,
  kUnsupportedSize,
  kRange,            // value outside Huffman table coverage
  kCorruptStream,
  kTruncatedStream,
  kUnsupportedFormat,
  kTruncatedInput,
  kDataRange,        // sample exceeds declared bit depth
  kIo,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

inline void require(bool condition, const std::string& message) {
  if (!condition) fail(ErrorKind::kInvalidArgument, message);
}

}  // namespace dct3d
