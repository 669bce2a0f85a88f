#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dct3d/errors.hpp"

namespace dct3d {

// Square (Rank 2) or cubic (Rank 3) array of side n.
// Storage is layer-major: index = (layer * n + row) * n + col.
template <typename T, int Rank>
class Block {
  static_assert(Rank == 2 || Rank == 3);

 public:
  using value_type = T;
  static constexpr int kRank = Rank;

  Block() = default;
  explicit Block(int n, T fill = T{}) : n_(n), data_(cell_count(n), fill) {
    require(n >= 1, "block size must be >= 1");
  }
  Block(int n, std::vector<T> data) : n_(n), data_(std::move(data)) {
    require(n >= 1, "block size must be >= 1");
    require(data_.size() == cell_count(n), "block data length does not match size");
  }

  static std::size_t cell_count(int n) {
    std::size_t c = 1;
    for (int d = 0; d < Rank; ++d) c *= static_cast<std::size_t>(n);
    return c;
  }

  int size() const noexcept { return n_; }
  std::size_t count() const noexcept { return data_.size(); }

  T& at(int row, int col) requires(Rank == 2) {
    return data_[static_cast<std::size_t>(row) * n_ + col];
  }
  const T& at(int row, int col) const requires(Rank == 2) {
    return data_[static_cast<std::size_t>(row) * n_ + col];
  }
  T& at(int row, int col, int layer) requires(Rank == 3) {
    return data_[(static_cast<std::size_t>(layer) * n_ + row) * n_ + col];
  }
  const T& at(int row, int col, int layer) const requires(Rank == 3) {
    return data_[(static_cast<std::size_t>(layer) * n_ + row) * n_ + col];
  }

  std::span<T> values() noexcept { return data_; }
  std::span<const T> values() const noexcept { return data_; }

  bool operator==(const Block&) const = default;

 private:
  int n_ = 0;
  std::vector<T> data_;
};

using Block2D = Block<double, 2>;
using Block3D = Block<double, 3>;
using LevelBlock2D = Block<std::int32_t, 2>;
using LevelBlock3D = Block<std::int32_t, 3>;

}  // namespace dct3d
