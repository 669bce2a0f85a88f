#include "dct3d/metrics.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "dct3d/scan.hpp"
#include "dct3d/transform.hpp"

namespace dct3d {
namespace {

struct SquaredError {
  double sum = 0.0;
  std::uint64_t count = 0;
};

void accumulate(const Frame& a, const Frame& b, SquaredError& acc) {
  require(a.width == b.width && a.height == b.height, "frames differ in dimensions");
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    const double d = static_cast<double>(a.samples[i]) - b.samples[i];
    acc.sum += d * d;
  }
  acc.count += a.samples.size();
}

double to_psnr(double mse_value, double peak) {
  if (mse_value == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak / mse_value);
}

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  std::ostringstream out;
  out << std::fixed << std::setprecision(6) << v;
  return out.str();
}

}  // namespace

double mse(const Frame& a, const Frame& b) {
  SquaredError acc;
  accumulate(a, b, acc);
  return acc.count ? acc.sum / acc.count : 0.0;
}

double mse(std::span<const Frame> a, std::span<const Frame> b) {
  require(a.size() == b.size(), "sequences differ in frame count");
  SquaredError acc;
  for (std::size_t i = 0; i < a.size(); ++i) accumulate(a[i], b[i], acc);
  return acc.count ? acc.sum / acc.count : 0.0;
}

double psnr(const Frame& a, const Frame& b, double peak) { return to_psnr(mse(a, b), peak); }

double psnr(std::span<const Frame> a, std::span<const Frame> b, double peak) {
  return to_psnr(mse(a, b), peak);
}

double CoefficientStats::zero_fraction() const {
  return coefficients ? static_cast<double>(zeros) / coefficients : 0.0;
}

double CoefficientStats::first_layer_nonzero_fraction() const {
  std::uint64_t total = 0;
  for (auto n : layer_nonzeros) total += n;
  if (layer_nonzeros.empty() || total == 0) return std::numeric_limits<double>::quiet_NaN();
  return static_cast<double>(layer_nonzeros.front()) / total;
}

CoefficientStats still_stats(const Frame& f, const EncodeOptions& opts) {
  f.validate();
  const DctBasis basis(kBlockSize);
  const QuantTable table = still_table(opts.q);
  SampleMap map;
  if (opts.rescale_to_8bit) map = fit_sample_map(std::span(&f, 1));
  CoefficientStats st;
  st.diagonal_energy.assign(2 * kBlockSize - 1, 0.0);
  double energy = 0.0;
  const int rows = (f.height + kBlockSize - 1) / kBlockSize;
  const int cols = (f.width + kBlockSize - 1) / kBlockSize;
  for (int br = 0; br < rows; ++br) {
    for (int bc = 0; bc < cols; ++bc) {
      const Block2D coeffs = dct2d_forward(extract_block(f, br, bc, map), basis);
      const LevelBlock2D levels = quantize(coeffs, table);
      for (int u = 0; u < kBlockSize; ++u) {
        for (int v = 0; v < kBlockSize; ++v) {
          const double e = coeffs.at(u, v) * coeffs.at(u, v);
          st.diagonal_energy[u + v] += e;
          energy += e;
          if (levels.at(u, v) == 0) ++st.zeros;
        }
      }
      ++st.blocks;
      st.coefficients += levels.count();
    }
  }
  if (energy > 0.0) {
    for (double& e : st.diagonal_energy) e /= energy;
  }
  return st;
}

CoefficientStats cube_stats(std::span<const Frame> frames, const QuantCube& cube,
                            const SampleMap& map) {
  require(!frames.empty(), "no frames to analyse");
  const DctBasis basis(kBlockSize);
  const Frame& first = frames.front();
  CoefficientStats st;
  st.layer_nonzeros.assign(kBlockSize, 0);
  const int gops = static_cast<int>((frames.size() + kBlockSize - 1) / kBlockSize);
  const int rows = (first.height + kBlockSize - 1) / kBlockSize;
  const int cols = (first.width + kBlockSize - 1) / kBlockSize;
  for (int g = 0; g < gops; ++g) {
    for (int br = 0; br < rows; ++br) {
      for (int bc = 0; bc < cols; ++bc) {
        const LevelBlock3D levels =
            quantize(dct3d_forward(extract_cube(frames, g, br, bc, map), basis), cube);
        for (int p = 0; p < kBlockSize; ++p) {
          for (int r = 0; r < kBlockSize; ++r) {
            for (int c = 0; c < kBlockSize; ++c) {
              if (levels.at(r, c, p) == 0) {
                ++st.zeros;
              } else {
                ++st.layer_nonzeros[p];
              }
            }
          }
        }
        ++st.blocks;
        st.coefficients += levels.count();
      }
    }
  }
  return st;
}

double MetricsReport::compression_ratio() const {
  return stream_bytes ? static_cast<double>(original_bytes) / stream_bytes
                      : std::numeric_limits<double>::infinity();
}

double bitrate_mbps(std::uint64_t stream_bytes, int frame_count, Rational fps) {
  require(frame_count > 0 && fps.num > 0 && fps.den > 0, "bitrate needs frames and a frame rate");
  const double seconds = frame_count / fps.value();
  return static_cast<double>(stream_bytes) * 8.0 / seconds / 1e6;
}

std::string format_report(const MetricsReport& r) {
  std::ostringstream out;
  out << "mode=" << r.mode << '\n';
  for (const auto& [plane, db] : r.plane_psnr_db) {
    out << "psnr_" << plane << "_db=" << format_number(db) << '\n';
  }
  out << "psnr_mean_db=" << format_number(r.psnr_mean_db) << '\n';
  if (r.bitrate_mbps) out << "bitrate_mbps=" << format_number(*r.bitrate_mbps) << '\n';
  out << "compression_ratio=" << format_number(r.compression_ratio()) << '\n';
  out << "stream_bytes=" << r.stream_bytes << '\n';
  out << "original_bytes=" << r.original_bytes << '\n';
  out << "zero_fraction=" << format_number(r.zero_fraction) << '\n';
  if (r.first_layer_nonzero_fraction) {
    out << "first_layer_nonzero_fraction=" << format_number(*r.first_layer_nonzero_fraction)
        << '\n';
  }
  return out.str();
}

}  // namespace dct3d
