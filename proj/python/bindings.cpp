#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>

#include "dct3d/codec.hpp"
#include "dct3d/entropy.hpp"
#include "dct3d/errors.hpp"
#include "dct3d/metrics.hpp"
#include "dct3d/quant.hpp"
#include "dct3d/scan.hpp"
#include "dct3d/transform.hpp"

namespace py = pybind11;
using namespace dct3d;

namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;
using SampleArray = py::array_t<std::uint16_t, py::array::c_style | py::array::forcecast>;

// numpy (n, n) <-> Block2D; numpy (n, n, n) indexed [layer, row, col] <-> Block3D.
template <int Rank>
Block<double, Rank> to_block(const DoubleArray& a) {
  if (a.ndim() != Rank) throw py::value_error("expected a " + std::to_string(Rank) + "-D array");
  const auto n = a.shape(0);
  for (int d = 1; d < Rank; ++d) {
    if (a.shape(d) != n) throw py::value_error("array must be square/cubic");
  }
  std::vector<double> data(a.data(), a.data() + a.size());
  return Block<double, Rank>(static_cast<int>(n), std::move(data));
}

template <typename T, int Rank>
py::array_t<T> from_block(const Block<T, Rank>& b) {
  std::vector<py::ssize_t> shape(Rank, b.size());
  py::array_t<T> out(shape);
  std::memcpy(out.mutable_data(), b.values().data(), b.count() * sizeof(T));
  return out;
}

Frame to_frame(const py::array_t<std::uint16_t>& a, py::ssize_t offset, int w, int h, int depth) {
  Frame f(w, h, depth);
  std::memcpy(f.samples.data(), a.data() + offset, f.samples.size() * sizeof(std::uint16_t));
  return f;
}

// (frames, height, width) stack of planes.
std::vector<Frame> to_frames(const SampleArray& a, int depth) {
  if (a.ndim() != 3) throw py::value_error("expected a (frames, height, width) array");
  const int n = static_cast<int>(a.shape(0));
  const int h = static_cast<int>(a.shape(1));
  const int w = static_cast<int>(a.shape(2));
  std::vector<Frame> frames;
  for (int i = 0; i < n; ++i) frames.push_back(to_frame(a, static_cast<py::ssize_t>(i) * w * h, w, h, depth));
  return frames;
}

py::array_t<std::uint16_t> from_frames(const std::vector<Frame>& frames) {
  const auto& f0 = frames.front();
  py::array_t<std::uint16_t> out({static_cast<py::ssize_t>(frames.size()),
                                  static_cast<py::ssize_t>(f0.height),
                                  static_cast<py::ssize_t>(f0.width)});
  auto* dst = out.mutable_data();
  for (const auto& f : frames) {
    std::memcpy(dst, f.samples.data(), f.samples.size() * sizeof(std::uint16_t));
    dst += f.samples.size();
  }
  return out;
}

py::bytes to_bytes(const EncodedStream& s) {
  const auto b = serialize_stream(s);
  return py::bytes(reinterpret_cast<const char*>(b.data()), b.size());
}

EncodedStream from_bytes(const py::bytes& data) {
  const std::string_view v = data;
  return parse_stream(std::span(reinterpret_cast<const std::uint8_t*>(v.data()), v.size()));
}

EncodeOptions options(int q, double q3_scale, bool rescale, unsigned threads) {
  return {q, q3_scale, rescale, threads};
}

}  // namespace

PYBIND11_MODULE(_dct3d, m) {
  m.doc() = "3D-DCT transform codec";

  py::register_exception<Error>(m, "CodecError", PyExc_ValueError);

  // ---- transforms
  m.def("dct2d", [](const DoubleArray& a) {
    const auto b = to_block<2>(a);
    return from_block(dct2d_forward(b, DctBasis(b.size())));
  });
  m.def("idct2d", [](const DoubleArray& a) {
    const auto b = to_block<2>(a);
    return from_block(dct2d_inverse(b, DctBasis(b.size())));
  });
  m.def("dct3d", [](const DoubleArray& a) {
    const auto b = to_block<3>(a);
    return from_block(dct3d_forward(b, DctBasis(b.size())));
  }, "Forward 3D DCT of an (n, n, n) array indexed [layer, row, col].");
  m.def("idct3d", [](const DoubleArray& a) {
    const auto b = to_block<3>(a);
    return from_block(dct3d_inverse(b, DctBasis(b.size())));
  });

  // ---- quantization
  m.def("watson_table", [] { return from_block(watson_table().steps()); });
  m.def("chroma_table", [] { return from_block(chroma_table().steps()); });
  m.def("quality_scale", py::overload_cast<int>(&quality_scale), py::arg("q"));
  m.def("still_table", [](int q) { return from_block(still_table(q).steps()); }, py::arg("q"));
  m.def("luma_cube", [](int q, double q3_scale) { return from_block(luma_cube(q, q3_scale).steps()); },
        py::arg("q") = 50, py::arg("q3_scale") = 1.0,
        "Quantization cube, (8, 8, 8) indexed [layer, row, col].");

  // ---- scans
  // Positions as (row, col) / (row, col, layer) tuples.
  m.def(
      "zigzag_order",
      [](int n) {
        py::list out;
        for (const auto& p : zigzag_order(n).order) out.append(py::make_tuple(p[0], p[1]));
        return out;
      },
      py::arg("n") = 8);
  m.def(
      "layered_order",
      [](int n) {
        py::list out;
        for (const auto& p : layered_order(n).order) out.append(py::make_tuple(p[0], p[1], p[2]));
        return out;
      },
      py::arg("n") = 8);

  // ---- entropy coding helpers
  m.def("category", [](int v) { return category(v); });
  m.def("magnitude_bits", [](int v) { return magnitude_bits(v).to_string(); });
  m.def("huffman_dump", [] { return HuffmanTables::jpeg_luminance().dump(); });

  // ---- codec
  m.def("encode_still",
        [](const SampleArray& img, int bit_depth, int q, bool rescale) {
          if (img.ndim() != 2) throw py::value_error("expected a (height, width) array");
          const Frame f = to_frame(img, 0, static_cast<int>(img.shape(1)),
                                   static_cast<int>(img.shape(0)), bit_depth);
          return to_bytes(encode_still(f, options(q, 1.0, rescale, 1)));
        },
        py::arg("image"), py::arg("bit_depth") = 8, py::arg("q") = 50, py::arg("rescale") = false);
  m.def("decode_still", [](const py::bytes& data) {
    const Frame f = decode_still(from_bytes(data));
    py::array_t<std::uint16_t> out({static_cast<py::ssize_t>(f.height), static_cast<py::ssize_t>(f.width)});
    std::memcpy(out.mutable_data(), f.samples.data(), f.samples.size() * sizeof(std::uint16_t));
    return out;
  });

  m.def("encode_video",
        [](const SampleArray& frames, int q, double q3_scale, std::uint32_t fps_num,
           std::uint32_t fps_den, unsigned threads) {
          VideoCube v;
          v.frames = to_frames(frames, 8);
          v.width = v.frames.front().width;
          v.height = v.frames.front().height;
          v.fps = {fps_num, fps_den};
          return to_bytes(encode_video_mono(v, options(q, q3_scale, false, threads)));
        },
        py::arg("frames"), py::arg("q") = 50, py::arg("q3_scale") = 1.0, py::arg("fps_num") = 30,
        py::arg("fps_den") = 1, py::arg("threads") = 0);
  m.def("decode_video",
        [](const py::bytes& data) { return from_frames(decode_video_mono(from_bytes(data)).frames); });

  m.def("encode_volume",
        [](const SampleArray& slices, int bit_depth, int q, double q3_scale, bool rescale,
           unsigned threads) {
          Volume v;
          v.slices = to_frames(slices, bit_depth);
          v.width = v.slices.front().width;
          v.height = v.slices.front().height;
          v.bit_depth = bit_depth;
          return to_bytes(encode_volume(v, options(q, q3_scale, rescale, threads)));
        },
        py::arg("slices"), py::arg("bit_depth") = 8, py::arg("q") = 50, py::arg("q3_scale") = 1.0,
        py::arg("rescale") = false, py::arg("threads") = 0);
  m.def("decode_volume",
        [](const py::bytes& data) { return from_frames(decode_volume(from_bytes(data)).slices); });

  m.def("psnr",
        [](const SampleArray& a, const SampleArray& b, double peak) {
          if (a.size() != b.size()) throw py::value_error("arrays differ in size");
          Frame fa(static_cast<int>(a.size()), 1, 16), fb(static_cast<int>(b.size()), 1, 16);
          std::memcpy(fa.samples.data(), a.data(), a.size() * sizeof(std::uint16_t));
          std::memcpy(fb.samples.data(), b.data(), b.size() * sizeof(std::uint16_t));
          return psnr(fa, fb, peak);
        },
        py::arg("a"), py::arg("b"), py::arg("peak") = 255.0);
}
