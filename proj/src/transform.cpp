#include "dct3d/transform.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace dct3d {
namespace {

enum class Direction { kForward, kInverse };

// Applies the unnormalised 1D kernel cos(pi (2k+1) u / 2n) to every line of
// `data` running along the axis with the given stride; data.size() is a
// multiple of stride * n. Normalisation is applied once per coefficient by
// apply_alpha so that e.g. the 2D DC gain is exactly 1/n.
void transform_axis(std::span<double> data, const DctBasis& basis, std::size_t stride,
                    Direction dir) {
  const int n = basis.size();
  const std::size_t un = static_cast<std::size_t>(n);
  const std::size_t span_len = stride * un;
  std::vector<double> in(un), out(un);

  for (std::size_t base = 0; base < data.size(); base += span_len) {
    for (std::size_t lo = 0; lo < stride; ++lo) {
      const std::size_t start = base + lo;
      for (std::size_t k = 0; k < un; ++k) in[k] = data[start + k * stride];
      for (int u = 0; u < n; ++u) {
        double acc = 0.0;
        if (dir == Direction::kForward) {
          for (int k = 0; k < n; ++k) acc += basis.kernel(u, k) * in[k];
        } else {
          for (int k = 0; k < n; ++k) acc += basis.kernel(k, u) * in[k];
        }
        out[u] = acc;
      }
      for (std::size_t k = 0; k < un; ++k) data[start + k * stride] = out[k];
    }
  }
}

// Multiplies coefficient (i0, i1, ...) by alpha(i0) * alpha(i1) * ..., computed
// as sqrt(prod w) / n^(dims/2) with w = 1 for index 0 and 2 otherwise.
void apply_alpha(std::span<double> data, int n, int dims) {
  const double denom = std::pow(static_cast<double>(n), dims / 2.0);
  for (std::size_t i = 0; i < data.size(); ++i) {
    int twos = 0;
    std::size_t rest = i;
    for (int d = 0; d < dims; ++d) {
      if (rest % n != 0) ++twos;
      rest /= n;
    }
    // sqrt(2^twos) exactly for even counts.
    const double w = (twos % 2 == 0) ? static_cast<double>(1 << (twos / 2))
                                     : std::sqrt(static_cast<double>(1 << twos));
    data[i] *= w / denom;
  }
}

void check_size(int block_n, const DctBasis& basis) {
  if (block_n != basis.size()) {
    fail(ErrorKind::kInvalidArgument, "block size " + std::to_string(block_n) +
                                          " does not match basis size " +
                                          std::to_string(basis.size()));
  }
}

template <typename B>
void check_finite(const B& b) {
  for (double v : b.values()) {
    if (!std::isfinite(v)) fail(ErrorKind::kInvalidArgument, "non-finite sample in block");
  }
}

}  // namespace

double dct_alpha(int k, int n) {
  return k == 0 ? 1.0 / std::sqrt(static_cast<double>(n)) : std::sqrt(2.0 / n);
}

DctBasis::DctBasis(int n) : n_(n) {
  require(n >= 1, "DCT basis size must be >= 1");
  c_.resize(static_cast<std::size_t>(n) * n);
  k_.resize(c_.size());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const std::size_t at = static_cast<std::size_t>(i) * n + j;
      k_[at] = std::cos(std::numbers::pi * (2 * j + 1) * i / (2.0 * n));
      c_[at] = dct_alpha(i, n) * k_[at];
    }
  }
}

std::vector<double> dct1d_forward(std::span<const double> v, const DctBasis& basis) {
  check_size(static_cast<int>(v.size()), basis);
  std::vector<double> out(v.begin(), v.end());
  transform_axis(out, basis, 1, Direction::kForward);
  apply_alpha(out, basis.size(), 1);
  return out;
}

std::vector<double> dct1d_inverse(std::span<const double> v, const DctBasis& basis) {
  check_size(static_cast<int>(v.size()), basis);
  std::vector<double> out(v.begin(), v.end());
  apply_alpha(out, basis.size(), 1);
  transform_axis(out, basis, 1, Direction::kInverse);
  return out;
}

Block2D dct2d_forward(const Block2D& b, const DctBasis& basis, SeparableOrder order) {
  check_size(b.size(), basis);
  check_finite(b);
  Block2D s = b;
  const std::size_t n = static_cast<std::size_t>(b.size());
  // Rows run along stride 1 (the column index), columns along stride n.
  if (order == SeparableOrder::kRowsFirst) {
    transform_axis(s.values(), basis, 1, Direction::kForward);
    transform_axis(s.values(), basis, n, Direction::kForward);
  } else {
    transform_axis(s.values(), basis, n, Direction::kForward);
    transform_axis(s.values(), basis, 1, Direction::kForward);
  }
  apply_alpha(s.values(), basis.size(), 2);
  return s;
}

Block2D dct2d_inverse(const Block2D& s, const DctBasis& basis) {
  check_size(s.size(), basis);
  check_finite(s);
  Block2D b = s;
  const std::size_t n = static_cast<std::size_t>(s.size());
  apply_alpha(b.values(), basis.size(), 2);
  transform_axis(b.values(), basis, n, Direction::kInverse);
  transform_axis(b.values(), basis, 1, Direction::kInverse);
  return b;
}

Block3D dct3d_forward(const Block3D& b, const DctBasis& basis) {
  check_size(b.size(), basis);
  check_finite(b);
  Block3D t = b;
  const std::size_t n = static_cast<std::size_t>(b.size());
  transform_axis(t.values(), basis, 1, Direction::kForward);
  transform_axis(t.values(), basis, n, Direction::kForward);
  transform_axis(t.values(), basis, n * n, Direction::kForward);
  apply_alpha(t.values(), basis.size(), 3);
  return t;
}

Block3D dct3d_inverse(const Block3D& t, const DctBasis& basis) {
  check_size(t.size(), basis);
  check_finite(t);
  Block3D b = t;
  const std::size_t n = static_cast<std::size_t>(t.size());
  apply_alpha(b.values(), basis.size(), 3);
  transform_axis(b.values(), basis, n * n, Direction::kInverse);
  transform_axis(b.values(), basis, n, Direction::kInverse);
  transform_axis(b.values(), basis, 1, Direction::kInverse);
  return b;
}

}  // namespace dct3d
