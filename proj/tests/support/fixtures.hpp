#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dct3d/media.hpp"

namespace fixtures {

// SplitMix64: small, portable and identical on every platform, unlike the
// std distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  double uniform();  // [0, 1)
  double normal();
  int uniform_int(int lo, int hi);  // inclusive

 private:
  std::uint64_t state_;
};

// Low-motion head-and-shoulders scene at CIF size: a static studio
// backdrop, a slowly swaying head with blinking eyes and a moving mouth,
// and mild sensor noise. Stands in for the usual newsreader test clips.
dct3d::VideoCube talking_head_clip(int frame_count = 48, int width = 352, int height = 288,
                                   std::uint64_t seed = 7);

// 12-bit CT-like phantom: nested soft-edged ellipsoids over air.
dct3d::Volume smooth_phantom(int width = 512, int height = 512, int slices = 64);

// Uniform random samples in [0, max_value].
dct3d::Frame random_frame(int width, int height, int bit_depth, int max_value, Rng& rng);
dct3d::VideoCube random_clip(int width, int height, int frame_count, int max_value,
                             std::uint64_t seed);
dct3d::Volume random_volume(int width, int height, int slices, int bit_depth, int max_value,
                            std::uint64_t seed);

// Smooth diagonal ramp with a soft disc, 8 or 12 bits.
dct3d::Frame gradient_image(int width, int height, int bit_depth = 8);

// Fresh scratch directory under DCT3D_TEST_TMP (or the system temp dir).
std::filesystem::path scratch_dir(const std::string& name);

}  // namespace fixtures
