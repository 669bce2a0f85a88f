#pragma once

#include <span>

#include "dct3d/block.hpp"
#include "dct3d/container.hpp"
#include "dct3d/media.hpp"
#include "dct3d/quant.hpp"

namespace dct3d {

inline constexpr int kBlockSize = 8;

struct EncodeOptions {
  int q = 50;
  /// Extra multiplier on the quantization cube (video and volume modes).
  double q3_scale = 1.0;
  /// Linearly map samples onto [0, 255] before coding and back afterwards.
  bool rescale_to_8bit = false;
  /// Worker threads for per-GOP coding; 0 picks the hardware concurrency.
  unsigned threads = 0;
};

/// Linear sample map: coded = (x - offset) * scale.
struct SampleMap {
  double offset = 0.0;
  double scale = 1.0;

  double forward(double x) const { return (x - offset) * scale; }
  double inverse(double y) const { return y / scale + offset; }
};

/// Map sending [min, max] of the frames onto [0, 255], rounded through
/// float so encoder and decoder use the values stored in the header.
SampleMap fit_sample_map(std::span<const Frame> frames);

// Step tables the pipelines derive from (q, q3_scale).
QuantTable still_table(int q);
QuantCube luma_cube(int q, double q3_scale);
QuantCube chroma_cube(int q, double q3_scale);

/// 8x8 block at block coordinates (block_row, block_col) with edge
/// replication past the frame border.
Block2D extract_block(const Frame& f, int block_row, int block_col, const SampleMap& map = {});

/// 8x8x8 cube: layer p is frame gop * 8 + p (clamped to the last frame),
/// with spatial edge replication.
Block3D extract_cube(std::span<const Frame> frames, int gop, int block_row, int block_col,
                     const SampleMap& map = {});

EncodedStream encode_still(const Frame& f, const EncodeOptions& opts = {});
Frame decode_still(const EncodedStream& s);

EncodedStream encode_video_mono(const VideoCube& v, const EncodeOptions& opts = {});
VideoCube decode_video_mono(const EncodedStream& s);

struct ColorVideo {
  VideoCube y;
  VideoCube cb;
  VideoCube cr;
};

/// Chroma cubes must have the 4:2:0 dimensions of the luma cube
/// (ceil(w / 2) x ceil(h / 2)) and the same frame count.
EncodedStream encode_video_color(const VideoCube& y, const VideoCube& cb, const VideoCube& cr,
                                 const EncodeOptions& opts = {});
ColorVideo decode_video_color(const EncodedStream& s);

EncodedStream encode_volume(const Volume& v, const EncodeOptions& opts = {});
Volume decode_volume(const EncodedStream& s);

/// 2x2 mean (rounded); odd dimensions replicate the last row/column.
Frame subsample_420(const Frame& f);
/// Pixel replication up to (width, height).
Frame upsample_420(const Frame& f, int width, int height);

}  // namespace dct3d
