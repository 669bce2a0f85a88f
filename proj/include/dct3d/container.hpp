#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dct3d/errors.hpp"

namespace dct3d {

enum class StreamMode : std::uint8_t {
  kStill = 0,
  kVideoMono = 1,
  kVideoColor = 2,
  kVolume = 3,
};

const char* to_string(StreamMode mode);

inline constexpr std::uint8_t kContainerVersion = 1;
inline constexpr std::size_t kHeaderBytes = 49;

// '3DCT' container header. All multi-byte fields are little-endian.
//
//   offset size field
//        0    4 magic "3DCT"
//        4    1 version
//        5    1 mode
//        6   12 width, height, frame_count (u32, before padding)
//       18   12 padded width, height, frame_count (u32)
//       30    4 fps numerator, denominator (u16)
//       34    1 q
//       35    4 q3_scale (f32)
//       39    1 bit depth
//       40    1 rescale flag
//       41    8 sample map offset, scale (f32); coded = (x - offset) * scale
//
// The header is followed by one record per GOP (a single record for
// stills): a component-count byte, then per component a u32 payload byte
// length and the payload.
struct StreamHeader {
  StreamMode mode = StreamMode::kStill;
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::uint32_t frame_count = 1;
  std::uint32_t padded_width = 0;
  std::uint32_t padded_height = 0;
  std::uint32_t padded_frames = 1;
  std::uint16_t fps_num = 0;
  std::uint16_t fps_den = 1;
  std::uint8_t q = 50;
  float q3_scale = 1.0f;
  std::uint8_t bit_depth = 8;
  bool rescale = false;
  float map_offset = 0.0f;
  float map_scale = 1.0f;

  int component_count() const { return mode == StreamMode::kVideoColor ? 3 : 1; }
  std::size_t gop_count() const;

  bool operator==(const StreamHeader&) const = default;
};

using Payload = std::vector<std::uint8_t>;

struct EncodedStream {
  StreamHeader header;
  std::vector<std::vector<Payload>> gops;  // [gop][component]

  bool operator==(const EncodedStream&) const = default;
};

std::vector<std::uint8_t> serialize_header(const StreamHeader& h);
/// Parses and validates the fixed-size header at the start of `bytes`.
StreamHeader parse_header(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> serialize_stream(const EncodedStream& s);
EncodedStream parse_stream(std::span<const std::uint8_t> bytes);

}  // namespace dct3d
