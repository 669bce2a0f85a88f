#include "cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "dct3d/codec.hpp"
#include "dct3d/entropy.hpp"
#include "dct3d/errors.hpp"
#include "dct3d/io_media.hpp"
#include "dct3d/metrics.hpp"
#include "dct3d/quant.hpp"

namespace dct3d::cli {
namespace {

namespace fs = std::filesystem;

const std::map<std::string, StreamMode> kModes = {
    {"still", StreamMode::kStill},
    {"video-mono", StreamMode::kVideoMono},
    {"video-color", StreamMode::kVideoColor},
    {"volume", StreamMode::kVolume},
};

struct CodingFlags {
  std::string mode = "still";
  int q = 50;
  double q3_scale = 1.0;
  bool rescale = false;
  unsigned threads = 0;

  EncodeOptions options() const { return {q, q3_scale, rescale, threads}; }
};

void add_coding_flags(CLI::App& cmd, CodingFlags& f) {
  cmd.add_option("--mode", f.mode, "still | video-mono | video-color | volume")
      ->check(CLI::IsMember({"still", "video-mono", "video-color", "volume"}));
  cmd.add_option("--q", f.q, "quality factor 1..100")->check(CLI::Range(1, 100));
  cmd.add_option("--q3-scale", f.q3_scale, "multiplier on the quantization cube")
      ->check(CLI::PositiveNumber);
  cmd.add_flag("--rescale-12bit", f.rescale, "map samples onto 8-bit range before coding");
  cmd.add_option("--threads", f.threads, "worker threads (0 = all cores)");
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kIo: return kExitIo;
    case ErrorKind::kUnsupportedFormat:
    case ErrorKind::kTruncatedInput:
    case ErrorKind::kDataRange: return kExitInputFormat;
    case ErrorKind::kCorruptStream:
    case ErrorKind::kTruncatedStream: return kExitCorruptStream;
    case ErrorKind::kRange: return kExitRange;
    case ErrorKind::kInvalidArgument:
    case ErrorKind::kUnsupportedSize: return kExitInvalidArgument;
  }
  return kExitInvalidArgument;
}

std::vector<std::uint8_t> read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kIo, "cannot open '" + path.string() + "' for reading");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const fs::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::kIo, "cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorKind::kIo, "write to '" + path.string() + "' failed");
}

// Stream parse errors all count as a damaged stream, whatever the cause.
EncodedStream load_stream(const fs::path& path) {
  const auto bytes = read_bytes(path);
  try {
    return parse_stream(bytes);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kIo) throw;
    throw Error(ErrorKind::kCorruptStream, path.string() + ": " + e.what());
  }
}

std::uint64_t bytes_per_sample(int bit_depth) { return bit_depth > 8 ? 2 : 1; }

std::uint64_t plane_bytes(const Frame& f) {
  return static_cast<std::uint64_t>(f.width) * f.height * bytes_per_sample(f.bit_depth);
}

std::uint64_t stack_bytes(std::span<const Frame> frames) {
  std::uint64_t total = 0;
  for (const auto& f : frames) total += plane_bytes(f);
  return total;
}

double mean_of(const std::vector<std::pair<std::string, double>>& planes) {
  double sum = 0.0;
  for (const auto& [name, db] : planes) sum += db;
  return sum / static_cast<double>(planes.size());
}

void merge(CoefficientStats& into, const CoefficientStats& from) {
  into.blocks += from.blocks;
  into.coefficients += from.coefficients;
  into.zeros += from.zeros;
  if (into.layer_nonzeros.size() < from.layer_nonzeros.size()) {
    into.layer_nonzeros.resize(from.layer_nonzeros.size(), 0);
  }
  for (std::size_t i = 0; i < from.layer_nonzeros.size(); ++i) {
    into.layer_nonzeros[i] += from.layer_nonzeros[i];
  }
}

// Media loaded for one coding mode; exactly one member is populated.
struct Media {
  StreamMode mode;
  Frame still;
  VideoCube video;  // video-mono
  Y4mVideo color;   // video-color
  Volume volume;
};

Media load_media(const std::string& mode_name, const fs::path& input) {
  Media m{kModes.at(mode_name), {}, {}, {}, {}};
  switch (m.mode) {
    case StreamMode::kStill: m.still = read_pgm_file(input); break;
    case StreamMode::kVideoMono: m.video = read_y4m_file(input).y; break;
    case StreamMode::kVideoColor:
      m.color = read_y4m_file(input);
      require(!m.color.header.mono(), "video-color needs a 4:2:0 input, got Cmono");
      break;
    case StreamMode::kVolume: m.volume = read_raw_volume(read_volume_sidecar(input)); break;
  }
  return m;
}

EncodedStream encode_media(const Media& m, const EncodeOptions& opts) {
  switch (m.mode) {
    case StreamMode::kStill: return encode_still(m.still, opts);
    case StreamMode::kVideoMono: return encode_video_mono(m.video, opts);
    case StreamMode::kVideoColor:
      return encode_video_color(m.color.y, m.color.cb, m.color.cr, opts);
    case StreamMode::kVolume: return encode_volume(m.volume, opts);
  }
  fail(ErrorKind::kInvalidArgument, "unknown mode");
}

// Per-component statistics: (name, stats).
std::vector<std::pair<std::string, CoefficientStats>> media_stats(const Media& m,
                                                                  const EncodeOptions& opts) {
  const double q3 = static_cast<float>(opts.q3_scale);
  switch (m.mode) {
    case StreamMode::kStill: return {{"y", still_stats(m.still, opts)}};
    case StreamMode::kVideoMono:
      return {{"y", cube_stats(m.video.frames, luma_cube(opts.q, q3))}};
    case StreamMode::kVideoColor:
      return {{"y", cube_stats(m.color.y.frames, luma_cube(opts.q, q3))},
              {"cb", cube_stats(m.color.cb.frames, chroma_cube(opts.q, q3))},
              {"cr", cube_stats(m.color.cr.frames, chroma_cube(opts.q, q3))}};
    case StreamMode::kVolume: {
      SampleMap map;
      if (opts.rescale_to_8bit) map = fit_sample_map(m.volume.slices);
      return {{"y", cube_stats(m.volume.slices, luma_cube(opts.q, q3), map)}};
    }
  }
  return {};
}

MetricsReport build_report(const Media& m, const std::vector<std::uint8_t>& stream_bytes,
                           const EncodeOptions& opts) {
  const EncodedStream s = parse_stream(stream_bytes);
  MetricsReport r;
  r.mode = to_string(m.mode);
  r.stream_bytes = stream_bytes.size();
  switch (m.mode) {
    case StreamMode::kStill: {
      const Frame out = decode_still(s);
      r.plane_psnr_db = {{"y", psnr(m.still, out, m.still.max_value())}};
      r.original_bytes = plane_bytes(m.still);
      break;
    }
    case StreamMode::kVideoMono: {
      const VideoCube out = decode_video_mono(s);
      r.plane_psnr_db = {{"y", psnr(m.video.frames, out.frames, (1 << m.video.bit_depth) - 1)}};
      r.original_bytes = stack_bytes(m.video.frames);
      r.bitrate_mbps = bitrate_mbps(r.stream_bytes, m.video.frame_count(), m.video.fps);
      break;
    }
    case StreamMode::kVideoColor: {
      const ColorVideo out = decode_video_color(s);
      r.plane_psnr_db = {{"y", psnr(m.color.y.frames, out.y.frames, 255)},
                         {"cb", psnr(m.color.cb.frames, out.cb.frames, 255)},
                         {"cr", psnr(m.color.cr.frames, out.cr.frames, 255)}};
      r.original_bytes = stack_bytes(m.color.y.frames) + stack_bytes(m.color.cb.frames) +
                         stack_bytes(m.color.cr.frames);
      r.bitrate_mbps = bitrate_mbps(r.stream_bytes, m.color.y.frame_count(), m.color.y.fps);
      break;
    }
    case StreamMode::kVolume: {
      const Volume out = decode_volume(s);
      r.plane_psnr_db = {{"y", psnr(m.volume.slices, out.slices, (1 << m.volume.bit_depth) - 1)}};
      r.original_bytes = stack_bytes(m.volume.slices);
      break;
    }
  }
  r.psnr_mean_db = mean_of(r.plane_psnr_db);

  CoefficientStats all;
  for (const auto& [name, st] : media_stats(m, opts)) merge(all, st);
  r.zero_fraction = all.zero_fraction();
  if (m.mode != StreamMode::kStill) r.first_layer_nonzero_fraction = all.first_layer_nonzero_fraction();
  return r;
}

std::string fmt(double v) {
  std::ostringstream out;
  if (std::isnan(v)) return "nan";
  out << std::fixed << std::setprecision(6) << v;
  return out.str();
}

std::string format_stats(const std::vector<std::pair<std::string, CoefficientStats>>& stats) {
  std::ostringstream out;
  for (const auto& [name, st] : stats) {
    out << name << ".blocks=" << st.blocks << '\n';
    out << name << ".zero_fraction=" << fmt(st.zero_fraction()) << '\n';
    if (!st.layer_nonzeros.empty()) {
      std::uint64_t total = 0;
      for (auto n : st.layer_nonzeros) total += n;
      out << name << ".first_layer_nonzero_fraction=" << fmt(st.first_layer_nonzero_fraction())
          << '\n';
      for (std::size_t k = 0; k < st.layer_nonzeros.size(); ++k) {
        const double share = total ? static_cast<double>(st.layer_nonzeros[k]) / total : 0.0;
        out << name << ".layer_nonzero_share_" << k << '=' << fmt(share) << '\n';
      }
    }
    for (std::size_t d = 0; d < st.diagonal_energy.size(); ++d) {
      out << name << ".diagonal_energy_" << d << '=' << fmt(st.diagonal_energy[d]) << '\n';
    }
  }
  return out.str();
}

int cmd_encode(const CodingFlags& flags, const fs::path& input, const fs::path& output,
               bool report, bool stats, std::ostream& out) {
  const EncodeOptions opts = flags.options();
  const Media media = load_media(flags.mode, input);
  const auto bytes = serialize_stream(encode_media(media, opts));
  write_bytes(output, bytes);
  if (report) out << format_report(build_report(media, bytes, opts));
  if (stats) out << format_stats(media_stats(media, opts));
  return kExitOk;
}

int cmd_decode(const std::optional<std::string>& mode_flag, const fs::path& input,
               const fs::path& output, std::ostream& err) {
  const EncodedStream s = load_stream(input);
  const StreamMode mode = s.header.mode;
  if (mode_flag && kModes.at(*mode_flag) != mode) {
    err << "warning: --mode " << *mode_flag << " ignored; stream holds " << to_string(mode)
        << " data\n";
  }
  try {
    switch (mode) {
      case StreamMode::kStill: write_pgm_file(output, decode_still(s)); break;
      case StreamMode::kVideoMono: {
        Y4mVideo v;
        v.y = decode_video_mono(s);
        v.header.width = v.y.width;
        v.header.height = v.y.height;
        v.header.fps = v.y.fps;
        v.header.chroma = "mono";
        write_y4m_file(output, v);
        break;
      }
      case StreamMode::kVideoColor: {
        ColorVideo c = decode_video_color(s);
        Y4mVideo v{{}, std::move(c.y), std::move(c.cb), std::move(c.cr)};
        v.header.width = v.y.width;
        v.header.height = v.y.height;
        v.header.fps = v.y.fps;
        write_y4m_file(output, v);
        break;
      }
      case StreamMode::kVolume: {
        const Volume v = decode_volume(s);
        write_raw_volume(output, v);
        RawVolumeLayout layout{v.width, v.height, v.slice_count(), v.bit_depth, ByteOrder::kLittle,
                           {output}};
        write_volume_sidecar(fs::path(output.string() + ".json"), layout);
        break;
      }
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kTruncatedStream || e.kind() == ErrorKind::kCorruptStream ||
        e.kind() == ErrorKind::kIo) {
      throw;
    }
    // Anything else while decoding means the payload disagrees with its header.
    throw Error(ErrorKind::kCorruptStream, e.what());
  }
  return kExitOk;
}

int cmd_stats(const CodingFlags& flags, const fs::path& input, std::ostream& out) {
  const Media media = load_media(flags.mode, input);
  out << format_stats(media_stats(media, flags.options()));
  return kExitOk;
}

int cmd_tables(const std::string& which, int q, double q3_scale, std::ostream& out) {
  if (which == "huffman") {
    out << HuffmanTables::jpeg_luminance().dump();
  } else if (which == "watson") {
    out << to_csv(still_table(q));
  } else if (which == "chroma") {
    out << to_csv(scale_table(chroma_table(), quality_scale(q)));
  } else if (which == "q3") {
    out << to_csv(luma_cube(q, q3_scale));
  } else {
    out << to_csv(chroma_cube(q, q3_scale));
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"3D-DCT transform codec for stills, video and volumes"};
  app.require_subcommand(1);

  CodingFlags enc_flags;
  std::string enc_in, enc_out;
  bool report = false, stats = false;
  auto* enc = app.add_subcommand("encode", "encode media into a 3DCT stream");
  add_coding_flags(*enc, enc_flags);
  enc->add_flag("--report", report, "decode back and print metrics (key=value)");
  enc->add_flag("--stats", stats, "print quantized coefficient statistics");
  enc->add_option("input", enc_in, "input media (.pgm, .y4m, or volume sidecar .json)")
      ->required();
  enc->add_option("output", enc_out, "output .3dct stream")->required();

  std::string dec_mode, dec_in, dec_out;
  auto* dec = app.add_subcommand("decode", "decode a 3DCT stream");
  auto* dec_mode_opt = dec->add_option("--mode", dec_mode, "expected mode (header wins)")
                           ->check(CLI::IsMember({"still", "video-mono", "video-color", "volume"}));
  dec->add_option("input", dec_in, "input .3dct stream")->required();
  dec->add_option("output", dec_out, "output .pgm, .y4m, or raw volume blob")->required();

  CodingFlags st_flags;
  std::string st_in;
  auto* st = app.add_subcommand("stats", "report quantized coefficient statistics");
  add_coding_flags(*st, st_flags);
  st->add_option("input", st_in, "input media")->required();

  std::string which = "huffman";
  int tab_q = 50;
  double tab_scale = 1.0;
  auto* tab = app.add_subcommand("tables", "print Huffman codes or quantization tables");
  tab->add_option("which", which, "huffman | watson | chroma | q3 | q3c")
      ->check(CLI::IsMember({"huffman", "watson", "chroma", "q3", "q3c"}));
  tab->add_option("--q", tab_q, "quality factor 1..100")->check(CLI::Range(1, 100));
  tab->add_option("--q3-scale", tab_scale, "cube multiplier")->check(CLI::PositiveNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*enc) return cmd_encode(enc_flags, enc_in, enc_out, report, stats, out);
    if (*dec) {
      std::optional<std::string> mode;
      if (*dec_mode_opt) mode = dec_mode;
      return cmd_decode(mode, dec_in, dec_out, err);
    }
    if (*st) return cmd_stats(st_flags, st_in, out);
    if (*tab) return cmd_tables(which, tab_q, tab_scale, out);
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidArgument;
  }
  return kExitUsage;
}

}  // namespace dct3d::cli
