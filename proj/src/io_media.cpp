#include "dct3d/io_media.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>

#include "dct3d/errors.hpp"
#include "json.hpp"

namespace dct3d {
namespace {

constexpr std::string_view kY4mMagic = "YUV4MPEG2";
constexpr std::size_t kMaxHeaderLine = 4096;

int parse_positive(std::string_view text, const char* what) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || v <= 0) {
    fail(ErrorKind::kUnsupportedFormat, std::string("bad ") + what + " '" + std::string(text) + "'");
  }
  return v;
}

Rational parse_ratio(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    fail(ErrorKind::kUnsupportedFormat, "bad frame rate '" + std::string(text) + "'");
  }
  return {static_cast<std::uint32_t>(parse_positive(text.substr(0, colon), "frame rate")),
          static_cast<std::uint32_t>(parse_positive(text.substr(colon + 1), "frame rate"))};
}

// Reads up to and including '\n'. Returns false on immediate EOF.
bool read_line(std::istream& in, std::string& line) {
  line.clear();
  char ch;
  while (in.get(ch)) {
    if (ch == '\n') return true;
    line.push_back(ch);
    if (line.size() > kMaxHeaderLine) fail(ErrorKind::kUnsupportedFormat, "header line too long");
  }
  if (line.empty()) return false;
  fail(ErrorKind::kTruncatedInput, "unterminated header line");
}

void read_exact(std::istream& in, char* dst, std::size_t n, const std::string& what) {
  in.read(dst, static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n) {
    fail(ErrorKind::kTruncatedInput, "short read in " + what);
  }
}

void read_plane8(std::istream& in, Frame& f, const std::string& what) {
  std::vector<char> buf(f.samples.size());
  read_exact(in, buf.data(), buf.size(), what);
  for (std::size_t i = 0; i < buf.size(); ++i) {
    f.samples[i] = static_cast<std::uint8_t>(buf[i]);
  }
}

void write_plane8(std::ostream& out, const Frame& f) {
  std::vector<char> buf(f.samples.size());
  for (std::size_t i = 0; i < buf.size(); ++i) {
    require(f.samples[i] <= 255, "Y4M output supports 8-bit samples only");
    buf[i] = static_cast<char>(f.samples[i]);
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kIo, "cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::kIo, "cannot open '" + path.string() + "' for writing");
  return out;
}

void finish_write(std::ostream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) fail(ErrorKind::kIo, "write to '" + path.string() + "' failed");
}

// PGM header tokens are separated by whitespace; '#' starts a comment
// running to end of line.
std::string pgm_token(std::istream& in) {
  std::string tok;
  char ch;
  while (in.get(ch)) {
    if (ch == '#') {
      while (in.get(ch) && ch != '\n') {
      }
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(ch))) {
      if (!tok.empty()) return tok;
      continue;
    }
    tok.push_back(ch);
  }
  if (tok.empty()) fail(ErrorKind::kTruncatedInput, "PGM header ends early");
  return tok;
}

}  // namespace

Y4mHeader parse_y4m_header(const std::string& line) {
  std::istringstream fields(line);
  std::string tok;
  if (!(fields >> tok) || tok != kY4mMagic) {
    fail(ErrorKind::kUnsupportedFormat, "not a YUV4MPEG2 stream");
  }
  Y4mHeader h;
  bool have_w = false, have_h = false;
  while (fields >> tok) {
    const std::string_view value = std::string_view(tok).substr(1);
    switch (tok[0]) {
      case 'W':
        h.width = parse_positive(value, "width");
        have_w = true;
        break;
      case 'H':
        h.height = parse_positive(value, "height");
        have_h = true;
        break;
      case 'F': h.fps = parse_ratio(value); break;
      case 'I': h.interlace = std::string(value); break;
      case 'A': h.aspect = std::string(value); break;
      case 'C':
        if (value != "420" && value != "420jpeg" && value != "420mpeg2" && value != "mono") {
          fail(ErrorKind::kUnsupportedFormat, "unsupported chroma tag C" + std::string(value));
        }
        h.chroma = std::string(value);
        break;
      default: h.extra.push_back(tok); break;
    }
  }
  if (!have_w || !have_h) fail(ErrorKind::kUnsupportedFormat, "Y4M header lacks W or H");
  return h;
}

std::string format_y4m_header(const Y4mHeader& h) {
  std::ostringstream out;
  out << kY4mMagic << " W" << h.width << " H" << h.height << " F" << h.fps.num << ':' << h.fps.den
      << " I" << h.interlace << " A" << h.aspect << " C" << h.chroma;
  for (const auto& e : h.extra) out << ' ' << e;
  return out.str();
}

Y4mVideo read_y4m(std::istream& in) {
  std::string line;
  if (!read_line(in, line)) fail(ErrorKind::kTruncatedInput, "empty Y4M stream");
  Y4mVideo v;
  v.header = parse_y4m_header(line);
  const auto& h = v.header;
  v.y = {h.width, h.height, 8, h.fps, {}};
  if (!h.mono()) {
    v.cb = {h.chroma_width(), h.chroma_height(), 8, h.fps, {}};
    v.cr = v.cb;
  }
  while (read_line(in, line)) {
    if (!line.starts_with("FRAME")) {
      fail(ErrorKind::kUnsupportedFormat, "expected FRAME marker");
    }
    const std::string what = "frame " + std::to_string(v.y.frames.size());
    Frame y(h.width, h.height);
    read_plane8(in, y, what);
    if (!h.mono()) {
      Frame cb(h.chroma_width(), h.chroma_height());
      Frame cr(h.chroma_width(), h.chroma_height());
      read_plane8(in, cb, what);
      read_plane8(in, cr, what);
      v.cb.frames.push_back(std::move(cb));
      v.cr.frames.push_back(std::move(cr));
    }
    v.y.frames.push_back(std::move(y));
  }
  if (v.y.frames.empty()) fail(ErrorKind::kTruncatedInput, "Y4M stream has no frames");
  return v;
}

Y4mVideo read_y4m_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_y4m(in);
}

void write_y4m(std::ostream& out, const Y4mVideo& video) {
  const auto& h = video.header;
  require(h.width > 0 && h.height > 0, "Y4M dimensions must be positive");
  require(video.y.width == h.width && video.y.height == h.height, "luma plane size mismatch");
  if (!h.mono()) {
    require(video.cb.frames.size() == video.y.frames.size() &&
                video.cr.frames.size() == video.y.frames.size(),
            "chroma frame count mismatch");
  }
  out << format_y4m_header(h) << '\n';
  for (std::size_t i = 0; i < video.y.frames.size(); ++i) {
    const Frame& y = video.y.frames[i];
    require(y.width == h.width && y.height == h.height, "luma frame size mismatch");
    out << "FRAME\n";
    write_plane8(out, y);
    if (!h.mono()) {
      for (const Frame* c : {&video.cb.frames[i], &video.cr.frames[i]}) {
        require(c->width == h.chroma_width() && c->height == h.chroma_height(),
                "chroma frame size does not match the 4:2:0 layout");
        write_plane8(out, *c);
      }
    }
  }
}

void write_y4m_file(const std::filesystem::path& path, const Y4mVideo& video) {
  auto out = open_out(path);
  write_y4m(out, video);
  finish_write(out, path);
}

Frame read_pgm(std::istream& in) {
  char magic[2];
  in.read(magic, 2);
  if (in.gcount() != 2) fail(ErrorKind::kTruncatedInput, "empty PGM input");
  if (magic[0] != 'P' || magic[1] != '5') {
    fail(ErrorKind::kUnsupportedFormat, "only binary PGM (P5) is supported");
  }
  const int w = parse_positive(pgm_token(in), "PGM width");
  const int h = parse_positive(pgm_token(in), "PGM height");
  const int maxval = parse_positive(pgm_token(in), "PGM maxval");
  // pgm_token consumed the single whitespace byte after maxval.
  int depth;
  if (maxval == 255) {
    depth = 8;
  } else if (maxval == 4095) {
    depth = 12;
  } else {
    fail(ErrorKind::kUnsupportedFormat, "unsupported PGM maxval " + std::to_string(maxval));
  }
  Frame f(w, h, depth);
  if (depth == 8) {
    read_plane8(in, f, "PGM raster");
  } else {
    std::vector<unsigned char> buf(f.samples.size() * 2);
    read_exact(in, reinterpret_cast<char*>(buf.data()), buf.size(), "PGM raster");
    for (std::size_t i = 0; i < f.samples.size(); ++i) {
      f.samples[i] = static_cast<std::uint16_t>((buf[2 * i] << 8) | buf[2 * i + 1]);
    }
  }
  f.validate();
  return f;
}

Frame read_pgm_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_pgm(in);
}

void write_pgm(std::ostream& out, const Frame& f) {
  f.validate();
  out << "P5\n" << f.width << ' ' << f.height << '\n' << f.max_value() << '\n';
  if (f.bit_depth == 8) {
    write_plane8(out, f);
  } else {
    std::vector<char> buf(f.samples.size() * 2);
    for (std::size_t i = 0; i < f.samples.size(); ++i) {
      buf[2 * i] = static_cast<char>(f.samples[i] >> 8);
      buf[2 * i + 1] = static_cast<char>(f.samples[i] & 0xFF);
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  }
}

void write_pgm_file(const std::filesystem::path& path, const Frame& f) {
  auto out = open_out(path);
  write_pgm(out, f);
  finish_write(out, path);
}

std::uintmax_t RawVolumeLayout::expected_bytes() const {
  return static_cast<std::uintmax_t>(width) * height * slice_count * bytes_per_sample();
}

Volume read_raw_volume(const RawVolumeLayout& layout) {
  require(layout.width > 0 && layout.height > 0, "volume dimensions must be positive");
  require(layout.slice_count > 0, "volume must have at least one slice");
  require(layout.bit_depth == 8 || layout.bit_depth == 12, "volume bit depth must be 8 or 12");
  require(!layout.files.empty(), "volume layout lists no files");

  std::uintmax_t total = 0;
  for (const auto& p : layout.files) {
    std::error_code ec;
    const auto size = std::filesystem::file_size(p, ec);
    if (ec) fail(ErrorKind::kIo, "cannot stat '" + p.string() + "': " + ec.message());
    total += size;
  }
  if (total != layout.expected_bytes()) {
    fail(ErrorKind::kInvalidArgument, "volume files hold " + std::to_string(total) +
                                          " bytes, expected " +
                                          std::to_string(layout.expected_bytes()));
  }

  std::vector<unsigned char> raw;
  raw.reserve(total);
  for (const auto& p : layout.files) {
    auto in = open_in(p);
    raw.insert(raw.end(), std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  if (raw.size() != total) fail(ErrorKind::kTruncatedInput, "volume files shrank while reading");

  Volume v{layout.width, layout.height, layout.bit_depth, {}};
  const std::size_t plane = static_cast<std::size_t>(layout.width) * layout.height;
  const int bps = layout.bytes_per_sample();
  for (int s = 0; s < layout.slice_count; ++s) {
    Frame f(layout.width, layout.height, layout.bit_depth);
    const unsigned char* base = raw.data() + static_cast<std::size_t>(s) * plane * bps;
    for (std::size_t i = 0; i < plane; ++i) {
      if (bps == 1) {
        f.samples[i] = base[i];
      } else {
        const unsigned lo = base[2 * i], hi = base[2 * i + 1];
        f.samples[i] = static_cast<std::uint16_t>(
            layout.byte_order == ByteOrder::kLittle ? (hi << 8) | lo : (lo << 8) | hi);
      }
    }
    f.validate();
    v.slices.push_back(std::move(f));
  }
  return v;
}

void write_raw_volume(const std::filesystem::path& blob, const Volume& v, ByteOrder order) {
  v.validate();
  auto out = open_out(blob);
  const bool wide = v.bit_depth > 8;
  std::vector<char> buf;
  for (const auto& f : v.slices) {
    buf.clear();
    for (std::uint16_t s : f.samples) {
      if (!wide) {
        buf.push_back(static_cast<char>(s));
      } else if (order == ByteOrder::kLittle) {
        buf.push_back(static_cast<char>(s & 0xFF));
        buf.push_back(static_cast<char>(s >> 8));
      } else {
        buf.push_back(static_cast<char>(s >> 8));
        buf.push_back(static_cast<char>(s & 0xFF));
      }
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  }
  finish_write(out, blob);
}

RawVolumeLayout read_volume_sidecar(const std::filesystem::path& path) {
  auto in = open_in(path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kUnsupportedFormat, "volume sidecar '" + path.string() + "': " + e.what());
  }
  RawVolumeLayout layout;
  try {
    layout.width = j.at("width").get<int>();
    layout.height = j.at("height").get<int>();
    layout.slice_count = j.at("slices").get<int>();
    layout.bit_depth = j.value("bit_depth", 8);
    const std::string endian = j.value("endianness", std::string("little"));
    if (endian == "little") {
      layout.byte_order = ByteOrder::kLittle;
    } else if (endian == "big") {
      layout.byte_order = ByteOrder::kBig;
    } else {
      fail(ErrorKind::kUnsupportedFormat, "endianness must be 'little' or 'big'");
    }
    const auto dir = path.parent_path();
    for (const auto& f : j.at("files")) {
      std::filesystem::path p = f.get<std::string>();
      layout.files.push_back(p.is_absolute() ? p : dir / p);
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kUnsupportedFormat, "volume sidecar '" + path.string() + "': " + e.what());
  }
  return layout;
}

void write_volume_sidecar(const std::filesystem::path& path, const RawVolumeLayout& layout) {
  nlohmann::json j;
  j["width"] = layout.width;
  j["height"] = layout.height;
  j["slices"] = layout.slice_count;
  j["bit_depth"] = layout.bit_depth;
  j["endianness"] = layout.byte_order == ByteOrder::kLittle ? "little" : "big";
  auto files = nlohmann::json::array();
  const auto dir = std::filesystem::absolute(path).parent_path();
  for (const auto& f : layout.files) {
    files.push_back(std::filesystem::proximate(std::filesystem::absolute(f), dir).generic_string());
  }
  j["files"] = files;
  auto out = open_out(path);
  out << j.dump(2) << '\n';
  finish_write(out, path);
}

}  // namespace dct3d
