#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "dct3d/errors.hpp"
#include "dct3d/media.hpp"

namespace dct3d {

// ---- YUV4MPEG2 ----------------------------------------------------------

struct Y4mHeader {
  int width = 0;
  int height = 0;
  Rational fps{30, 1};
  std::string interlace = "p";
  std::string aspect = "0:0";
  /// One of "420", "420jpeg", "420mpeg2", "mono". Siting variants are
  /// treated alike.
  std::string chroma = "420jpeg";
  /// Unrecognised header tokens (e.g. X comments), written back verbatim.
  std::vector<std::string> extra;

  bool mono() const { return chroma == "mono"; }
  int chroma_width() const { return (width + 1) / 2; }
  int chroma_height() const { return (height + 1) / 2; }
  bool operator==(const Y4mHeader&) const = default;
};

struct Y4mVideo {
  Y4mHeader header;
  VideoCube y;
  VideoCube cb;  // empty for mono streams
  VideoCube cr;
};

Y4mHeader parse_y4m_header(const std::string& line);
std::string format_y4m_header(const Y4mHeader& h);

Y4mVideo read_y4m(std::istream& in);
Y4mVideo read_y4m_file(const std::filesystem::path& path);
void write_y4m(std::ostream& out, const Y4mVideo& video);
void write_y4m_file(const std::filesystem::path& path, const Y4mVideo& video);

// ---- PGM (binary P5) ---------------------------------------------------

/// maxval 255 gives an 8-bit frame, 4095 a 12-bit one (big-endian words).
Frame read_pgm(std::istream& in);
Frame read_pgm_file(const std::filesystem::path& path);
void write_pgm(std::ostream& out, const Frame& f);
void write_pgm_file(const std::filesystem::path& path, const Frame& f);

// ---- raw slice stacks ----------------------------------------------------

enum class ByteOrder { kLittle, kBig };

/// Slices are stored back to back, row-major; 12-bit samples use 16-bit
/// words. `files` are concatenated in order (one blob or one file per
/// slice, or anything in between).
struct RawVolumeLayout {
  int width = 0;
  int height = 0;
  int slice_count = 0;
  int bit_depth = 8;
  ByteOrder byte_order = ByteOrder::kLittle;
  std::vector<std::filesystem::path> files;

  int bytes_per_sample() const { return bit_depth > 8 ? 2 : 1; }
  std::uintmax_t expected_bytes() const;
};

Volume read_raw_volume(const RawVolumeLayout& layout);
/// Writes all slices into one blob.
void write_raw_volume(const std::filesystem::path& blob, const Volume& v,
                      ByteOrder order = ByteOrder::kLittle);

/// Sidecar JSON: {"width", "height", "slices", "bit_depth", "endianness":
/// "little"|"big", "files": [...]}. Relative file paths resolve against the
/// sidecar's directory.
RawVolumeLayout read_volume_sidecar(const std::filesystem::path& path);
void write_volume_sidecar(const std::filesystem::path& path, const RawVolumeLayout& layout);

}  // namespace dct3d
