#pragma once

#include <span>
#include <vector>

#include "dct3d/block.hpp"

namespace dct3d {

// Orthonormal DCT-II basis: c[i][j] = alpha(i) * cos(pi * (2j + 1) * i / (2n)),
// alpha(0) = 1/sqrt(n), alpha(i > 0) = sqrt(2/n). Immutable after construction.
class DctBasis {
 public:
  explicit DctBasis(int n);

  int size() const noexcept { return n_; }
  double operator()(int i, int j) const { return c_[static_cast<std::size_t>(i) * n_ + j]; }
  // cos term without alpha(i).
  double kernel(int i, int j) const { return k_[static_cast<std::size_t>(i) * n_ + j]; }
  std::span<const double> row(int i) const {
    return std::span<const double>(c_).subspan(static_cast<std::size_t>(i) * n_, n_);
  }

 private:
  int n_;
  std::vector<double> c_;
  std::vector<double> k_;
};

// alpha(k) normalisation of the DCT-II kernel for block size n.
double dct_alpha(int k, int n);

enum class SeparableOrder { kRowsFirst, kColumnsFirst };

std::vector<double> dct1d_forward(std::span<const double> v, const DctBasis& basis);
std::vector<double> dct1d_inverse(std::span<const double> v, const DctBasis& basis);

// S = C * X * C^T, computed as 1D transforms of rows and columns.
Block2D dct2d_forward(const Block2D& b, const DctBasis& basis,
                      SeparableOrder order = SeparableOrder::kRowsFirst);
Block2D dct2d_inverse(const Block2D& s, const DctBasis& basis);

// 2D transform of every layer followed by 1D transforms along the layer axis.
Block3D dct3d_forward(const Block3D& b, const DctBasis& basis);
Block3D dct3d_inverse(const Block3D& t, const DctBasis& basis);

}  // namespace dct3d
