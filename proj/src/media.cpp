#include "dct3d/media.hpp"

#include <string>

#include "dct3d/errors.hpp"

namespace dct3d {
namespace {

void validate_stack(int width, int height, int bit_depth, const std::vector<Frame>& frames,
                    const char* what) {
  require(!frames.empty(), std::string(what) + " has no frames");
  for (const auto& f : frames) {
    require(f.width == width && f.height == height && f.bit_depth == bit_depth,
            std::string(what) + " frames must share dimensions and bit depth");
    f.validate();
  }
}

}  // namespace

Frame::Frame(int w, int h, int depth, std::uint16_t fill)
    : width(w), height(h), bit_depth(depth) {
  require(w > 0 && h > 0, "frame dimensions must be positive");
  samples.assign(static_cast<std::size_t>(w) * h, fill);
}

void Frame::validate() const {
  require(width > 0 && height > 0, "frame dimensions must be positive");
  require(bit_depth == 8 || bit_depth == 12, "bit depth must be 8 or 12");
  require(samples.size() == static_cast<std::size_t>(width) * height,
          "frame sample count does not match dimensions");
  const int peak = max_value();
  for (std::uint16_t s : samples) {
    if (s > peak) {
      fail(ErrorKind::kDataRange, "sample " + std::to_string(s) + " exceeds " +
                                      std::to_string(bit_depth) + "-bit range");
    }
  }
}

void VideoCube::validate() const { validate_stack(width, height, bit_depth, frames, "video"); }

void Volume::validate() const { validate_stack(width, height, bit_depth, slices, "volume"); }

}  // namespace dct3d
