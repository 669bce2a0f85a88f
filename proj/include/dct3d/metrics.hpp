#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dct3d/codec.hpp"
#include "dct3d/media.hpp"

namespace dct3d {

/// Mean squared error over all samples. Dimensions must match.
double mse(const Frame& a, const Frame& b);
double mse(std::span<const Frame> a, std::span<const Frame> b);

/// 10 * log10(peak^2 / MSE); +infinity for identical inputs.
double psnr(const Frame& a, const Frame& b, double peak);
double psnr(std::span<const Frame> a, std::span<const Frame> b, double peak);

/// Quantized-coefficient statistics for one component.
struct CoefficientStats {
  std::uint64_t blocks = 0;
  std::uint64_t coefficients = 0;
  std::uint64_t zeros = 0;
  /// Nonzero count per layer (third index) for 3D coding; empty for 2D.
  std::vector<std::uint64_t> layer_nonzeros;
  /// Share of transform energy on each anti-diagonal u + v (2D only).
  std::vector<double> diagonal_energy;

  double zero_fraction() const;
  /// Nonzeros in layer 0 over all nonzeros (3D only; NaN without nonzeros).
  double first_layer_nonzero_fraction() const;
};

CoefficientStats still_stats(const Frame& f, const EncodeOptions& opts = {});
CoefficientStats cube_stats(std::span<const Frame> frames, const QuantCube& cube,
                            const SampleMap& map = {});

struct MetricsReport {
  std::string mode;
  std::vector<std::pair<std::string, double>> plane_psnr_db;  // e.g. {"y", 41.2}
  double psnr_mean_db = 0.0;
  std::optional<double> bitrate_mbps;
  std::uint64_t stream_bytes = 0;
  std::uint64_t original_bytes = 0;
  double zero_fraction = 0.0;
  std::optional<double> first_layer_nonzero_fraction;

  double compression_ratio() const;
};

/// Total bits over playback duration, in 10^6 bits per second.
double bitrate_mbps(std::uint64_t stream_bytes, int frame_count, Rational fps);

/// `key=value` lines, fixed key order, six decimals, "inf" for infinities.
std::string format_report(const MetricsReport& r);

}  // namespace dct3d
