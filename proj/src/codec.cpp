#include "dct3d/codec.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <string>
#include <thread>

#include "dct3d/entropy.hpp"
#include "dct3d/scan.hpp"
#include "dct3d/transform.hpp"

namespace dct3d {
namespace {

constexpr std::size_t kBlockLen2D = kBlockSize * kBlockSize;
constexpr std::size_t kBlockLen3D = kBlockLen2D * kBlockSize;

int padded(int v) { return (v + kBlockSize - 1) / kBlockSize * kBlockSize; }

const DctBasis& basis8() {
  static const DctBasis basis(kBlockSize);
  return basis;
}
const ScanOrder2D& zigzag8() {
  static const ScanOrder2D order = zigzag_order(kBlockSize);
  return order;
}
const ScanOrder3D& layered8() {
  static const ScanOrder3D order = layered_order(kBlockSize);
  return order;
}

// Runs fn(0..count-1) on up to `threads` workers. If several calls throw,
// the exception of the lowest index is rethrown, so errors do not depend
// on scheduling.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  std::vector<std::exception_ptr> errors(count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
        break;
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::string location(std::size_t gop, int component, int block_row, int block_col) {
  return "GOP " + std::to_string(gop) + ", component " + std::to_string(component) +
         ", block (" + std::to_string(block_row) + "," + std::to_string(block_col) + "): ";
}

[[noreturn]] void rethrow_with_location(const Error& e, const std::string& where) {
  std::string msg = where + e.what();
  if (e.kind() == ErrorKind::kRange) {
    msg += " (enable 12-bit rescaling or raise the quantization scale)";
  }
  throw Error(e.kind(), msg);
}

std::uint16_t reconstruct(double value, const SampleMap& map, int peak) {
  const double x = std::round(map.inverse(value));
  return static_cast<std::uint16_t>(std::clamp(x, 0.0, static_cast<double>(peak)));
}

void check_payload_tail(const BitReader& in, const std::string& where) {
  if (in.remaining() >= 8) {
    fail(ErrorKind::kCorruptStream, where + std::to_string(in.remaining()) +
                                        " unused bits after the last block");
  }
}

// --- 2D ---------------------------------------------------------------

Payload encode_plane(const Frame& f, const QuantTable& table, const SampleMap& map) {
  const auto& tables = HuffmanTables::jpeg_luminance();
  BitWriter out;
  const int rows = padded(f.height) / kBlockSize;
  const int cols = padded(f.width) / kBlockSize;
  for (int br = 0; br < rows; ++br) {
    for (int bc = 0; bc < cols; ++bc) {
      try {
        const auto levels = quantize(dct2d_forward(extract_block(f, br, bc, map), basis8()), table);
        encode_block(tokenize(serialize(levels, zigzag8())), tables, kBlockLen2D, out);
      } catch (const Error& e) {
        rethrow_with_location(e, location(0, 0, br, bc));
      }
    }
  }
  out.pad_to_byte();
  return out.take_bytes();
}

void decode_plane(const Payload& payload, const QuantTable& table, const SampleMap& map,
                  Frame& f) {
  const auto& tables = HuffmanTables::jpeg_luminance();
  BitReader in(payload);
  const int rows = padded(f.height) / kBlockSize;
  const int cols = padded(f.width) / kBlockSize;
  const int peak = f.max_value();
  for (int br = 0; br < rows; ++br) {
    for (int bc = 0; bc < cols; ++bc) {
      Block2D block;
      try {
        const auto tokens = decode_block(in, tables, kBlockLen2D);
        block = dct2d_inverse(
            dequantize(deserialize(detokenize(tokens, kBlockLen2D), zigzag8()), table), basis8());
      } catch (const Error& e) {
        rethrow_with_location(e, location(0, 0, br, bc));
      }
      for (int r = 0; r < kBlockSize; ++r) {
        const int y = br * kBlockSize + r;
        if (y >= f.height) break;
        for (int c = 0; c < kBlockSize; ++c) {
          const int x = bc * kBlockSize + c;
          if (x >= f.width) break;
          f.at(x, y) = reconstruct(block.at(r, c), map, peak);
        }
      }
    }
  }
  check_payload_tail(in, location(0, 0, rows, 0));
}

// --- 3D ---------------------------------------------------------------

Payload encode_gop(std::span<const Frame> frames, std::size_t gop, int component,
                   const QuantCube& cube, const SampleMap& map) {
  const auto& tables = HuffmanTables::jpeg_luminance();
  const Frame& first = frames.front();
  BitWriter out;
  const int rows = padded(first.height) / kBlockSize;
  const int cols = padded(first.width) / kBlockSize;
  for (int br = 0; br < rows; ++br) {
    for (int bc = 0; bc < cols; ++bc) {
      try {
        const auto cube_in = extract_cube(frames, static_cast<int>(gop), br, bc, map);
        const auto levels = quantize(dct3d_forward(cube_in, basis8()), cube);
        encode_block(tokenize(serialize(levels, layered8())), tables, kBlockLen3D, out);
      } catch (const Error& e) {
        rethrow_with_location(e, location(gop, component, br, bc));
      }
    }
  }
  out.pad_to_byte();
  return out.take_bytes();
}

// Writes the frames of one GOP into `frames` (already sized to the cropped
// output); layers past the end of the sequence are dropped.
void decode_gop(const Payload& payload, std::size_t gop, int component, const QuantCube& cube,
                const SampleMap& map, std::span<Frame> frames) {
  const auto& tables = HuffmanTables::jpeg_luminance();
  const Frame& first = frames.front();
  const int width = first.width;
  const int height = first.height;
  const int peak = first.max_value();
  const int frame_count = static_cast<int>(frames.size());
  BitReader in(payload);
  const int rows = padded(height) / kBlockSize;
  const int cols = padded(width) / kBlockSize;
  for (int br = 0; br < rows; ++br) {
    for (int bc = 0; bc < cols; ++bc) {
      Block3D block;
      try {
        const auto tokens = decode_block(in, tables, kBlockLen3D);
        block = dct3d_inverse(
            dequantize(deserialize(detokenize(tokens, kBlockLen3D), layered8()), cube), basis8());
      } catch (const Error& e) {
        rethrow_with_location(e, location(gop, component, br, bc));
      }
      for (int p = 0; p < kBlockSize; ++p) {
        const int t = static_cast<int>(gop) * kBlockSize + p;
        if (t >= frame_count) break;
        Frame& f = frames[t];
        for (int r = 0; r < kBlockSize; ++r) {
          const int y = br * kBlockSize + r;
          if (y >= height) break;
          for (int c = 0; c < kBlockSize; ++c) {
            const int x = bc * kBlockSize + c;
            if (x >= width) break;
            f.at(x, y) = reconstruct(block.at(r, c, p), map, peak);
          }
        }
      }
    }
  }
  check_payload_tail(in, location(gop, component, rows, 0));
}

float checked_q3_scale(double q3_scale) {
  require(std::isfinite(q3_scale) && q3_scale > 0.0, "q3 scale must be positive");
  const float f = static_cast<float>(q3_scale);
  require(f > 0.0f && std::isfinite(f), "q3 scale out of float range");
  return f;
}

StreamHeader make_header(StreamMode mode, int width, int height, int frames, Rational fps,
                         int bit_depth, const EncodeOptions& opts, const SampleMap* map) {
  QualityFactor q(opts.q);
  StreamHeader h;
  h.mode = mode;
  h.width = static_cast<std::uint32_t>(width);
  h.height = static_cast<std::uint32_t>(height);
  h.frame_count = static_cast<std::uint32_t>(frames);
  h.padded_width = static_cast<std::uint32_t>(padded(width));
  h.padded_height = static_cast<std::uint32_t>(padded(height));
  h.padded_frames = mode == StreamMode::kStill ? 1u : static_cast<std::uint32_t>(padded(frames));
  require(fps.num <= 0xFFFF && fps.den <= 0xFFFF, "frame rate terms must fit in 16 bits");
  h.fps_num = static_cast<std::uint16_t>(fps.num);
  h.fps_den = static_cast<std::uint16_t>(fps.den);
  h.q = static_cast<std::uint8_t>(q.value());
  h.q3_scale = checked_q3_scale(opts.q3_scale);
  h.bit_depth = static_cast<std::uint8_t>(bit_depth);
  if (map) {
    h.rescale = true;
    h.map_offset = static_cast<float>(map->offset);
    h.map_scale = static_cast<float>(map->scale);
  }
  return h;
}

SampleMap header_map(const StreamHeader& h) {
  if (!h.rescale) return {};
  return {static_cast<double>(h.map_offset), static_cast<double>(h.map_scale)};
}

void expect_mode(const StreamHeader& h, StreamMode mode) {
  if (h.mode != mode) {
    fail(ErrorKind::kInvalidArgument, std::string("stream holds ") + to_string(h.mode) +
                                          " data, expected " + to_string(mode));
  }
}

std::vector<Frame> blank_frames(int width, int height, int bit_depth, int count) {
  return std::vector<Frame>(static_cast<std::size_t>(count), Frame(width, height, bit_depth));
}

// Shared by video-mono and volume: one component, Watson-derived cube.
EncodedStream encode_stack(StreamMode mode, std::span<const Frame> frames, Rational fps,
                           const EncodeOptions& opts) {
  const Frame& first = frames.front();
  SampleMap map;
  if (opts.rescale_to_8bit) map = fit_sample_map(frames);
  EncodedStream s;
  s.header = make_header(mode, first.width, first.height, static_cast<int>(frames.size()), fps,
                         first.bit_depth, opts, opts.rescale_to_8bit ? &map : nullptr);
  const QuantCube cube = luma_cube(opts.q, s.header.q3_scale);
  s.gops.resize(s.header.gop_count());
  parallel_for(s.gops.size(), opts.threads, [&](std::size_t g) {
    s.gops[g] = {encode_gop(frames, g, 0, cube, map)};
  });
  return s;
}

std::vector<Frame> decode_stack(const EncodedStream& s) {
  const auto& h = s.header;
  require(s.gops.size() == h.gop_count(), "GOP count does not match header");
  auto frames = blank_frames(static_cast<int>(h.width), static_cast<int>(h.height), h.bit_depth,
                             static_cast<int>(h.frame_count));
  const QuantCube cube = luma_cube(h.q, h.q3_scale);
  const SampleMap map = header_map(h);
  parallel_for(s.gops.size(), 0, [&](std::size_t g) {
    require(s.gops[g].size() == 1, "mono stream GOP must hold one component");
    decode_gop(s.gops[g][0], g, 0, cube, map, frames);
  });
  return frames;
}

}  // namespace

SampleMap fit_sample_map(std::span<const Frame> frames) {
  std::uint16_t lo = std::numeric_limits<std::uint16_t>::max();
  std::uint16_t hi = 0;
  for (const auto& f : frames) {
    const auto [mn, mx] = std::minmax_element(f.samples.begin(), f.samples.end());
    lo = std::min(lo, *mn);
    hi = std::max(hi, *mx);
  }
  const float offset = static_cast<float>(lo);
  const float scale = hi > lo ? 255.0f / static_cast<float>(hi - lo) : 1.0f;
  return {static_cast<double>(offset), static_cast<double>(scale)};
}

QuantTable still_table(int q) { return scale_table(watson_table(), quality_scale(q)); }

QuantCube luma_cube(int q, double q3_scale) {
  return build_q3(watson_table(), q3_scale * quality_scale(q));
}

QuantCube chroma_cube(int q, double q3_scale) {
  return build_q3(chroma_table(), q3_scale * quality_scale(q));
}

Block2D extract_block(const Frame& f, int block_row, int block_col, const SampleMap& map) {
  Block2D b(kBlockSize);
  for (int r = 0; r < kBlockSize; ++r) {
    const int y = std::min(block_row * kBlockSize + r, f.height - 1);
    for (int c = 0; c < kBlockSize; ++c) {
      const int x = std::min(block_col * kBlockSize + c, f.width - 1);
      b.at(r, c) = map.forward(f.at(x, y));
    }
  }
  return b;
}

Block3D extract_cube(std::span<const Frame> frames, int gop, int block_row, int block_col,
                     const SampleMap& map) {
  Block3D b(kBlockSize);
  const int last = static_cast<int>(frames.size()) - 1;
  for (int p = 0; p < kBlockSize; ++p) {
    const Frame& f = frames[std::min(gop * kBlockSize + p, last)];
    for (int r = 0; r < kBlockSize; ++r) {
      const int y = std::min(block_row * kBlockSize + r, f.height - 1);
      for (int c = 0; c < kBlockSize; ++c) {
        const int x = std::min(block_col * kBlockSize + c, f.width - 1);
        b.at(r, c, p) = map.forward(f.at(x, y));
      }
    }
  }
  return b;
}

EncodedStream encode_still(const Frame& f, const EncodeOptions& opts) {
  f.validate();
  SampleMap map;
  if (opts.rescale_to_8bit) map = fit_sample_map(std::span(&f, 1));
  EncodedStream s;
  s.header = make_header(StreamMode::kStill, f.width, f.height, 1, {0, 1}, f.bit_depth, opts,
                         opts.rescale_to_8bit ? &map : nullptr);
  s.gops = {{encode_plane(f, still_table(opts.q), map)}};
  return s;
}

Frame decode_still(const EncodedStream& s) {
  const auto& h = s.header;
  expect_mode(h, StreamMode::kStill);
  require(s.gops.size() == 1 && s.gops[0].size() == 1, "still stream must hold one payload");
  Frame f(static_cast<int>(h.width), static_cast<int>(h.height), h.bit_depth);
  decode_plane(s.gops[0][0], still_table(h.q), header_map(h), f);
  return f;
}

EncodedStream encode_video_mono(const VideoCube& v, const EncodeOptions& opts) {
  v.validate();
  return encode_stack(StreamMode::kVideoMono, v.frames, v.fps, opts);
}

VideoCube decode_video_mono(const EncodedStream& s) {
  expect_mode(s.header, StreamMode::kVideoMono);
  VideoCube v;
  v.width = static_cast<int>(s.header.width);
  v.height = static_cast<int>(s.header.height);
  v.bit_depth = s.header.bit_depth;
  v.fps = {s.header.fps_num, s.header.fps_den};
  v.frames = decode_stack(s);
  return v;
}

EncodedStream encode_video_color(const VideoCube& y, const VideoCube& cb, const VideoCube& cr,
                                 const EncodeOptions& opts) {
  y.validate();
  cb.validate();
  cr.validate();
  const int cw = (y.width + 1) / 2;
  const int ch = (y.height + 1) / 2;
  for (const VideoCube* c : {&cb, &cr}) {
    require(c->width == cw && c->height == ch,
            "chroma planes must be " + std::to_string(cw) + "x" + std::to_string(ch));
    require(c->frame_count() == y.frame_count(), "chroma frame count differs from luma");
    require(c->bit_depth == y.bit_depth, "chroma bit depth differs from luma");
  }
  require(!opts.rescale_to_8bit, "sample rescaling is not supported for color video");

  EncodedStream s;
  s.header = make_header(StreamMode::kVideoColor, y.width, y.height, y.frame_count(), y.fps,
                         y.bit_depth, opts, nullptr);
  const QuantCube luma = luma_cube(opts.q, s.header.q3_scale);
  const QuantCube chroma = chroma_cube(opts.q, s.header.q3_scale);
  const std::array<const VideoCube*, 3> planes = {&y, &cb, &cr};
  const std::size_t gops = s.header.gop_count();
  s.gops.assign(gops, std::vector<Payload>(3));
  parallel_for(gops * 3, opts.threads, [&](std::size_t job) {
    const std::size_t g = job / 3;
    const int c = static_cast<int>(job % 3);
    s.gops[g][c] = encode_gop(planes[c]->frames, g, c, c == 0 ? luma : chroma, {});
  });
  return s;
}

ColorVideo decode_video_color(const EncodedStream& s) {
  const auto& h = s.header;
  expect_mode(h, StreamMode::kVideoColor);
  require(s.gops.size() == h.gop_count(), "GOP count does not match header");
  const int w = static_cast<int>(h.width);
  const int ht = static_cast<int>(h.height);
  const int frames = static_cast<int>(h.frame_count);
  const Rational fps{h.fps_num, h.fps_den};
  ColorVideo out;
  out.y = {w, ht, h.bit_depth, fps, blank_frames(w, ht, h.bit_depth, frames)};
  const int cw = (w + 1) / 2;
  const int ch = (ht + 1) / 2;
  out.cb = {cw, ch, h.bit_depth, fps, blank_frames(cw, ch, h.bit_depth, frames)};
  out.cr = out.cb;
  const QuantCube luma = luma_cube(h.q, h.q3_scale);
  const QuantCube chroma = chroma_cube(h.q, h.q3_scale);
  const std::array<VideoCube*, 3> planes = {&out.y, &out.cb, &out.cr};
  parallel_for(s.gops.size() * 3, 0, [&](std::size_t job) {
    const std::size_t g = job / 3;
    const int c = static_cast<int>(job % 3);
    require(s.gops[g].size() == 3, "color stream GOP must hold three components");
    decode_gop(s.gops[g][c], g, c, c == 0 ? luma : chroma, {}, planes[c]->frames);
  });
  return out;
}

EncodedStream encode_volume(const Volume& v, const EncodeOptions& opts) {
  v.validate();
  return encode_stack(StreamMode::kVolume, v.slices, {0, 1}, opts);
}

Volume decode_volume(const EncodedStream& s) {
  expect_mode(s.header, StreamMode::kVolume);
  Volume v;
  v.width = static_cast<int>(s.header.width);
  v.height = static_cast<int>(s.header.height);
  v.bit_depth = s.header.bit_depth;
  v.slices = decode_stack(s);
  return v;
}

Frame subsample_420(const Frame& f) {
  f.validate();
  Frame out((f.width + 1) / 2, (f.height + 1) / 2, f.bit_depth);
  for (int y = 0; y < out.height; ++y) {
    const int y0 = 2 * y;
    const int y1 = std::min(y0 + 1, f.height - 1);
    for (int x = 0; x < out.width; ++x) {
      const int x0 = 2 * x;
      const int x1 = std::min(x0 + 1, f.width - 1);
      const int sum = f.at(x0, y0) + f.at(x1, y0) + f.at(x0, y1) + f.at(x1, y1);
      out.at(x, y) = static_cast<std::uint16_t>((sum + 2) / 4);
    }
  }
  return out;
}

Frame upsample_420(const Frame& f, int width, int height) {
  require(width > 0 && height > 0, "target dimensions must be positive");
  require((width + 1) / 2 == f.width && (height + 1) / 2 == f.height,
          "target dimensions are not the 4:2:0 parent of the plane");
  Frame out(width, height, f.bit_depth);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) out.at(x, y) = f.at(x / 2, y / 2);
  }
  return out;
}

}  // namespace dct3d
