#include "dct3d/scan.hpp"

#include <algorithm>
#include <string>

namespace dct3d {

ScanOrder2D zigzag_order(int n) {
  require(n >= 1, "scan size must be >= 1");
  ScanOrder2D s{n, {}};
  s.order.reserve(static_cast<std::size_t>(n) * n);
  for (int d = 0; d <= 2 * n - 2; ++d) {
    const int lo = std::max(0, d - (n - 1));
    const int hi = std::min(d, n - 1);
    if (d % 2 == 1) {
      for (int row = lo; row <= hi; ++row) s.order.push_back({row, d - row});
    } else {
      for (int row = hi; row >= lo; --row) s.order.push_back({row, d - row});
    }
  }
  return s;
}

ScanOrder3D layered_order(int n) {
  const ScanOrder2D plane = zigzag_order(n);
  ScanOrder3D s{n, {}};
  s.order.reserve(plane.order.size() * n);
  for (int layer = 0; layer < n; ++layer) {
    for (const auto& [row, col] : plane.order) s.order.push_back({row, col, layer});
  }
  return s;
}

std::vector<std::int32_t> serialize(const LevelBlock2D& block, const ScanOrder2D& order) {
  require(block.size() == order.n, "block and scan order differ in size");
  std::vector<std::int32_t> out;
  out.reserve(order.order.size());
  for (const auto& [row, col] : order.order) out.push_back(block.at(row, col));
  return out;
}

std::vector<std::int32_t> serialize(const LevelBlock3D& block, const ScanOrder3D& order) {
  require(block.size() == order.n, "block and scan order differ in size");
  std::vector<std::int32_t> out;
  out.reserve(order.order.size());
  for (const auto& [row, col, layer] : order.order) out.push_back(block.at(row, col, layer));
  return out;
}

LevelBlock2D deserialize(std::span<const std::int32_t> v, const ScanOrder2D& order) {
  require(v.size() == order.order.size(),
          "serialized length " + std::to_string(v.size()) + " does not match scan order");
  LevelBlock2D block(order.n);
  for (std::size_t p = 0; p < v.size(); ++p) {
    const auto& [row, col] = order.order[p];
    block.at(row, col) = v[p];
  }
  return block;
}

LevelBlock3D deserialize(std::span<const std::int32_t> v, const ScanOrder3D& order) {
  require(v.size() == order.order.size(),
          "serialized length " + std::to_string(v.size()) + " does not match scan order");
  LevelBlock3D block(order.n);
  for (std::size_t p = 0; p < v.size(); ++p) {
    const auto& [row, col, layer] = order.order[p];
    block.at(row, col, layer) = v[p];
  }
  return block;
}

}  // namespace dct3d
