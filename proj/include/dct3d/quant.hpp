#pragma once

#include <string>

#include "dct3d/block.hpp"

namespace dct3d {

/// 2D quantization step matrix. Every step is finite and >= 1.
class QuantTable {
 public:
  explicit QuantTable(Block2D steps);

  int size() const noexcept { return steps_.size(); }
  double at(int row, int col) const { return steps_.at(row, col); }
  const Block2D& steps() const noexcept { return steps_; }

  bool operator==(const QuantTable&) const = default;

 private:
  Block2D steps_;
};

/// 3D quantization step cube, indexed (row, col, layer). `scale` is the
/// multiplier that was applied when the cube was built.
class QuantCube {
 public:
  QuantCube(Block3D steps, double scale);

  int size() const noexcept { return steps_.size(); }
  double at(int row, int col, int layer) const { return steps_.at(row, col, layer); }
  const Block3D& steps() const noexcept { return steps_; }
  double scale() const noexcept { return scale_; }

  bool operator==(const QuantCube&) const = default;

 private:
  Block3D steps_;
  double scale_;
};

/// Quality factor in percent, 1..100.
class QualityFactor {
 public:
  explicit QualityFactor(int q);
  int value() const noexcept { return q_; }

 private:
  int q_;
};

// Watson luminance matrix (q = 50 reference).
QuantTable watson_table();
// Chroma matrix with slightly larger steps than the luminance one.
QuantTable chroma_table();

/// Multiplier applied to a reference table for quality q:
/// 2 - q/50 when q >= 50, 50/q below. q = 100 yields 0, which scale_table
/// clamps to unit steps.
double quality_scale(QualityFactor q);
double quality_scale(int q);

/// step -> max(1, round(step * factor)).
QuantTable scale_table(const QuantTable& t, double factor);

inline constexpr double kDefaultHighFrequencyStep = 100.0;

/// Builds the 8x8x8 quantization cube from a 2D table.
///
/// With 1-based indices (i, j, k) = (row, col, layer) and c0 = i + j + k:
///  - face cells copy the table, with precedence k == 1 -> Q(i,j), then
///    j == 1 -> Q(i,k), then i == 1 -> Q(j,k) (the table is not symmetric, so
///    cells on the k == 1 / i == 1 edge need a fixed winner);
///  - interior cells with c0 <= 17 take the rounded mean of the distinct face
///    cells with the same index sum;
///  - interior cells with c0 >= 18 take `hf_step`.
/// Every step is then multiplied by `scale` and clamped to >= 1.
QuantCube build_q3(const QuantTable& t, double scale = 1.0,
                   double hf_step = kDefaultHighFrequencyStep);

// round-half-away-from-zero of coeff / step.
LevelBlock2D quantize(const Block2D& coeffs, const QuantTable& steps);
LevelBlock3D quantize(const Block3D& coeffs, const QuantCube& steps);
Block2D dequantize(const LevelBlock2D& levels, const QuantTable& steps);
Block3D dequantize(const LevelBlock3D& levels, const QuantCube& steps);

// CSV: one row of the table per line. Cubes are written layer-major,
// n rows per layer, n * n lines in total.
std::string to_csv(const QuantTable& t);
std::string to_csv(const QuantCube& c);
QuantTable quant_table_from_csv(const std::string& text);
QuantCube quant_cube_from_csv(const std::string& text, double scale = 1.0);

}  // namespace dct3d
