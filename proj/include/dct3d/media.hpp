#pragma once

#include <cstdint>
#include <vector>

#include "dct3d/errors.hpp"

namespace dct3d {

/// Monochrome sample plane, row-major. bit_depth is 8 or 12.
struct Frame {
  int width = 0;
  int height = 0;
  int bit_depth = 8;
  std::vector<std::uint16_t> samples;

  Frame() = default;
  Frame(int w, int h, int depth = 8, std::uint16_t fill = 0);

  std::uint16_t& at(int x, int y) { return samples[static_cast<std::size_t>(y) * width + x]; }
  std::uint16_t at(int x, int y) const { return samples[static_cast<std::size_t>(y) * width + x]; }
  int max_value() const { return (1 << bit_depth) - 1; }

  /// Throws invalid-argument for bad dimensions/depth and data-range for
  /// samples above max_value().
  void validate() const;

  bool operator==(const Frame&) const = default;
};

struct Rational {
  std::uint32_t num = 0;
  std::uint32_t den = 1;
  double value() const { return den ? static_cast<double>(num) / den : 0.0; }
  bool operator==(const Rational&) const = default;
};

struct VideoCube {
  int width = 0;
  int height = 0;
  int bit_depth = 8;
  Rational fps{30, 1};
  std::vector<Frame> frames;

  int frame_count() const { return static_cast<int>(frames.size()); }
  void validate() const;
  bool operator==(const VideoCube&) const = default;
};

struct Volume {
  int width = 0;
  int height = 0;
  int bit_depth = 8;
  std::vector<Frame> slices;

  int slice_count() const { return static_cast<int>(slices.size()); }
  void validate() const;
  bool operator==(const Volume&) const = default;
};

}  // namespace dct3d
