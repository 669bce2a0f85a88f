#include "dct3d/container.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <string>

#include "dct3d/errors.hpp"

namespace dct3d {
namespace {

constexpr char kMagic[4] = {'3', 'D', 'C', 'T'};

std::uint32_t padded(std::uint32_t v, std::uint32_t multiple) {
  return (v + multiple - 1) / multiple * multiple;
}

class ByteSink {
 public:
  explicit ByteSink(std::vector<std::uint8_t>& out) : out_(out) {}
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v) {
    for (int i = 0; i < 2; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void bytes(std::span<const std::uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }

 private:
  std::vector<std::uint8_t>& out_;
};

class ByteSource {
 public:
  explicit ByteSource(std::span<const std::uint8_t> in) : in_(in) {}
  std::uint8_t u8() { return take(1)[0]; }
  std::uint16_t u16() {
    auto b = take(2);
    return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
  }
  std::uint32_t u32() {
    auto b = take(4);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
  }
  float f32() { return std::bit_cast<float>(u32()); }
  std::span<const std::uint8_t> take(std::size_t n) {
    if (in_.size() - pos_ < n) {
      fail(ErrorKind::kTruncatedStream, "stream ends at byte " + std::to_string(in_.size()) +
                                            ", needed " + std::to_string(n) + " more at " +
                                            std::to_string(pos_));
    }
    auto s = in_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  std::size_t position() const { return pos_; }
  std::size_t remaining() const { return in_.size() - pos_; }

 private:
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

void corrupt_unless(bool ok, const std::string& what) {
  if (!ok) fail(ErrorKind::kCorruptStream, "invalid header: " + what);
}

StreamHeader read_header(ByteSource& src) {
  auto magic = src.take(4);
  if (std::memcmp(magic.data(), kMagic, 4) != 0) {
    fail(ErrorKind::kUnsupportedFormat, "not a 3DCT stream (bad magic)");
  }
  const std::uint8_t version = src.u8();
  if (version != kContainerVersion) {
    fail(ErrorKind::kUnsupportedFormat, "unsupported 3DCT version " + std::to_string(version));
  }
  StreamHeader h;
  const std::uint8_t mode = src.u8();
  corrupt_unless(mode <= 3, "mode byte " + std::to_string(mode));
  h.mode = static_cast<StreamMode>(mode);
  h.width = src.u32();
  h.height = src.u32();
  h.frame_count = src.u32();
  h.padded_width = src.u32();
  h.padded_height = src.u32();
  h.padded_frames = src.u32();
  h.fps_num = src.u16();
  h.fps_den = src.u16();
  h.q = src.u8();
  h.q3_scale = src.f32();
  h.bit_depth = src.u8();
  const std::uint8_t rescale = src.u8();
  h.map_offset = src.f32();
  h.map_scale = src.f32();

  corrupt_unless(rescale <= 1, "rescale flag");
  h.rescale = rescale == 1;
  corrupt_unless(h.width > 0 && h.height > 0 && h.frame_count > 0, "zero dimension");
  corrupt_unless(h.width <= (1u << 24) && h.height <= (1u << 24) && h.frame_count <= (1u << 24),
                 "dimension too large");
  corrupt_unless(h.padded_width == padded(h.width, 8) && h.padded_height == padded(h.height, 8),
                 "padded dimensions");
  const std::uint32_t expect_frames = h.mode == StreamMode::kStill ? 1 : padded(h.frame_count, 8);
  corrupt_unless(h.mode != StreamMode::kStill || h.frame_count == 1, "still with frame count");
  corrupt_unless(h.padded_frames == expect_frames, "padded frame count");
  corrupt_unless(h.q >= 1 && h.q <= 100, "quality");
  corrupt_unless(std::isfinite(h.q3_scale) && h.q3_scale > 0.0f, "q3 scale");
  corrupt_unless(h.bit_depth == 8 || h.bit_depth == 12, "bit depth");
  corrupt_unless(std::isfinite(h.map_offset) && std::isfinite(h.map_scale) && h.map_scale > 0.0f,
                 "sample map");
  return h;
}

}  // namespace

const char* to_string(StreamMode mode) {
  switch (mode) {
    case StreamMode::kStill: return "still";
    case StreamMode::kVideoMono: return "video-mono";
    case StreamMode::kVideoColor: return "video-color";
    case StreamMode::kVolume: return "volume";
  }
  return "unknown";
}

std::size_t StreamHeader::gop_count() const {
  return mode == StreamMode::kStill ? 1 : padded_frames / 8;
}

std::vector<std::uint8_t> serialize_header(const StreamHeader& h) {
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderBytes);
  ByteSink sink(out);
  sink.bytes(std::span(reinterpret_cast<const std::uint8_t*>(kMagic), 4));
  sink.u8(kContainerVersion);
  sink.u8(static_cast<std::uint8_t>(h.mode));
  sink.u32(h.width);
  sink.u32(h.height);
  sink.u32(h.frame_count);
  sink.u32(h.padded_width);
  sink.u32(h.padded_height);
  sink.u32(h.padded_frames);
  sink.u16(h.fps_num);
  sink.u16(h.fps_den);
  sink.u8(h.q);
  sink.f32(h.q3_scale);
  sink.u8(h.bit_depth);
  sink.u8(h.rescale ? 1 : 0);
  sink.f32(h.map_offset);
  sink.f32(h.map_scale);
  return out;
}

StreamHeader parse_header(std::span<const std::uint8_t> bytes) {
  ByteSource src(bytes);
  return read_header(src);
}

std::vector<std::uint8_t> serialize_stream(const EncodedStream& s) {
  require(s.gops.size() == s.header.gop_count(), "GOP count does not match header");
  std::vector<std::uint8_t> out = serialize_header(s.header);
  ByteSink sink(out);
  for (const auto& gop : s.gops) {
    require(gop.size() == static_cast<std::size_t>(s.header.component_count()),
            "component count does not match header mode");
    sink.u8(static_cast<std::uint8_t>(gop.size()));
    for (const auto& payload : gop) {
      sink.u32(static_cast<std::uint32_t>(payload.size()));
      sink.bytes(payload);
    }
  }
  return out;
}

EncodedStream parse_stream(std::span<const std::uint8_t> bytes) {
  ByteSource src(bytes);
  EncodedStream s;
  s.header = read_header(src);
  const std::size_t gops = s.header.gop_count();
  s.gops.reserve(gops);
  for (std::size_t g = 0; g < gops; ++g) {
    const std::uint8_t components = src.u8();
    corrupt_unless(components == s.header.component_count(),
                   "GOP " + std::to_string(g) + " component count " + std::to_string(components));
    std::vector<Payload> gop;
    for (int c = 0; c < components; ++c) {
      const std::uint32_t len = src.u32();
      auto body = src.take(len);
      gop.emplace_back(body.begin(), body.end());
    }
    s.gops.push_back(std::move(gop));
  }
  if (src.remaining() != 0) {
    fail(ErrorKind::kCorruptStream,
         std::to_string(src.remaining()) + " trailing bytes after the last GOP");
  }
  return s;
}

}  // namespace dct3d
