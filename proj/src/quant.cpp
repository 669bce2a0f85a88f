#include "dct3d/quant.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace dct3d {
namespace {

constexpr std::array<int, 64> kWatson = {
    16, 11, 10, 16, 24,  40,  51,  61,   //
    12, 12, 14, 19, 26,  58,  60,  55,   //
    14, 13, 16, 24, 40,  57,  69,  56,   //
    14, 17, 22, 29, 51,  87,  80,  62,   //
    18, 22, 37, 56, 68,  109, 103, 77,   //
    24, 35, 55, 64, 81,  104, 113, 92,   //
    49, 64, 78, 87, 103, 121, 120, 101,  //
    72, 92, 95, 98, 112, 100, 103, 99,
};

constexpr std::array<int, 64> kChroma = {
    17, 18, 24, 47, 99, 99, 99, 99,  //
    18, 21, 26, 66, 99, 99, 99, 99,  //
    24, 26, 56, 99, 99, 99, 99, 99,  //
    47, 66, 99, 99, 99, 99, 99, 99,  //
    99, 99, 99, 99, 99, 99, 99, 99,  //
    99, 99, 99, 99, 99, 99, 99, 99,  //
    99, 99, 99, 99, 99, 99, 99, 99,  //
    99, 99, 99, 99, 99, 99, 99, 99,
};

QuantTable table_from(const std::array<int, 64>& values) {
  return QuantTable(Block2D(8, std::vector<double>(values.begin(), values.end())));
}

template <typename B>
void check_steps(const B& steps) {
  for (double s : steps.values()) {
    if (!std::isfinite(s) || s < 1.0) {
      fail(ErrorKind::kInvalidArgument, "quantization steps must be finite and >= 1");
    }
  }
}

template <typename Levels, typename Coeffs, typename Steps>
Levels quantize_impl(const Coeffs& coeffs, const Steps& steps) {
  require(coeffs.size() == steps.size(), "coefficient block and step table differ in size");
  Levels out(coeffs.size());
  auto c = coeffs.values();
  auto s = steps.steps().values();
  auto o = out.values();
  for (std::size_t i = 0; i < c.size(); ++i) {
    o[i] = static_cast<std::int32_t>(std::round(c[i] / s[i]));
  }
  return out;
}

template <typename Coeffs, typename Levels, typename Steps>
Coeffs dequantize_impl(const Levels& levels, const Steps& steps) {
  require(levels.size() == steps.size(), "level block and step table differ in size");
  Coeffs out(levels.size());
  auto l = levels.values();
  auto s = steps.steps().values();
  auto o = out.values();
  for (std::size_t i = 0; i < l.size(); ++i) o[i] = l[i] * s[i];
  return out;
}

std::vector<std::vector<double>> parse_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(field, &used));
      } catch (const std::exception&) {
        fail(ErrorKind::kUnsupportedFormat, "bad CSV field '" + field + "'");
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_row(std::ostringstream& out, std::span<const double> row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out << ',';
    out << row[i];
  }
  out << '\n';
}

}  // namespace

QuantTable::QuantTable(Block2D steps) : steps_(std::move(steps)) { check_steps(steps_); }

QuantCube::QuantCube(Block3D steps, double scale) : steps_(std::move(steps)), scale_(scale) {
  require(std::isfinite(scale) && scale >= 0.0, "cube scale must be finite and non-negative");
  check_steps(steps_);
}

QualityFactor::QualityFactor(int q) : q_(q) {
  require(q >= 1 && q <= 100, "quality factor must be in 1..100, got " + std::to_string(q));
}

QuantTable watson_table() { return table_from(kWatson); }
QuantTable chroma_table() { return table_from(kChroma); }

double quality_scale(QualityFactor q) {
  const double v = q.value();
  return v >= 50 ? 2.0 - v / 50.0 : 50.0 / v;
}

double quality_scale(int q) { return quality_scale(QualityFactor(q)); }

QuantTable scale_table(const QuantTable& t, double factor) {
  require(std::isfinite(factor) && factor >= 0.0, "scale factor must be finite and non-negative");
  Block2D steps = t.steps();
  for (double& s : steps.values()) s = std::max(1.0, std::round(s * factor));
  return QuantTable(std::move(steps));
}

QuantCube build_q3(const QuantTable& t, double scale, double hf_step) {
  if (t.size() != 8) {
    fail(ErrorKind::kUnsupportedSize,
         "quantization cube requires an 8x8 table, got " + std::to_string(t.size()));
  }
  require(std::isfinite(scale) && scale >= 0.0, "cube scale must be finite and non-negative");
  require(std::isfinite(hf_step) && hf_step > 0.0, "high-frequency step must be positive");

  constexpr int n = 8;
  // Each face cell is visited once, so the per-c0 sums run over distinct cells.
  auto q = [&](int r, int c) { return t.at(r - 1, c - 1); };
  std::vector<double> sum_by_c0(3 * n + 1, 0.0);
  std::vector<int> count_by_c0(3 * n + 1, 0);
  Block3D raw(n);
  for (int k = 1; k <= n; ++k) {
    for (int i = 1; i <= n; ++i) {
      for (int j = 1; j <= n; ++j) {
        double v;
        if (k == 1) {
          v = q(i, j);
        } else if (j == 1) {
          v = q(i, k);
        } else if (i == 1) {
          v = q(j, k);
        } else {
          continue;
        }
        raw.at(i - 1, j - 1, k - 1) = v;
        sum_by_c0[i + j + k] += v;
        ++count_by_c0[i + j + k];
      }
    }
  }
  for (int k = 2; k <= n; ++k) {
    for (int i = 2; i <= n; ++i) {
      for (int j = 2; j <= n; ++j) {
        const int c0 = i + j + k;
        raw.at(i - 1, j - 1, k - 1) =
            c0 >= 18 ? hf_step : std::round(sum_by_c0[c0] / count_by_c0[c0]);
      }
    }
  }
  for (double& s : raw.values()) s = std::max(1.0, s * scale);
  return QuantCube(std::move(raw), scale);
}

LevelBlock2D quantize(const Block2D& coeffs, const QuantTable& steps) {
  return quantize_impl<LevelBlock2D>(coeffs, steps);
}
LevelBlock3D quantize(const Block3D& coeffs, const QuantCube& steps) {
  return quantize_impl<LevelBlock3D>(coeffs, steps);
}
Block2D dequantize(const LevelBlock2D& levels, const QuantTable& steps) {
  return dequantize_impl<Block2D>(levels, steps);
}
Block3D dequantize(const LevelBlock3D& levels, const QuantCube& steps) {
  return dequantize_impl<Block3D>(levels, steps);
}

std::string to_csv(const QuantTable& t) {
  std::ostringstream out;
  out << std::setprecision(17);
  const auto v = t.steps().values();
  const std::size_t n = static_cast<std::size_t>(t.size());
  for (std::size_t r = 0; r < n; ++r) write_row(out, v.subspan(r * n, n));
  return out.str();
}

std::string to_csv(const QuantCube& c) {
  std::ostringstream out;
  out << std::setprecision(17);
  const auto v = c.steps().values();
  const std::size_t n = static_cast<std::size_t>(c.size());
  for (std::size_t r = 0; r < n * n; ++r) write_row(out, v.subspan(r * n, n));
  return out.str();
}

QuantTable quant_table_from_csv(const std::string& text) {
  const auto rows = parse_csv(text);
  const std::size_t n = rows.size();
  if (n == 0) fail(ErrorKind::kUnsupportedFormat, "empty quantization table CSV");
  std::vector<double> data;
  for (const auto& row : rows) {
    if (row.size() != n) fail(ErrorKind::kUnsupportedFormat, "quantization table CSV is not square");
    data.insert(data.end(), row.begin(), row.end());
  }
  return QuantTable(Block2D(static_cast<int>(n), std::move(data)));
}

QuantCube quant_cube_from_csv(const std::string& text, double scale) {
  const auto rows = parse_csv(text);
  if (rows.empty()) fail(ErrorKind::kUnsupportedFormat, "empty quantization cube CSV");
  const std::size_t n = rows.front().size();
  if (rows.size() != n * n) {
    fail(ErrorKind::kUnsupportedFormat, "quantization cube CSV must have n*n rows of n values");
  }
  std::vector<double> data;
  for (const auto& row : rows) {
    if (row.size() != n) fail(ErrorKind::kUnsupportedFormat, "ragged quantization cube CSV");
    data.insert(data.end(), row.begin(), row.end());
  }
  return QuantCube(Block3D(static_cast<int>(n), std::move(data)), scale);
}

}  // namespace dct3d
