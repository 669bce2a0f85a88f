#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "dct3d/block.hpp"

namespace dct3d {

struct ScanOrder2D {
  int n = 0;
  std::vector<std::array<int, 2>> order;  // (row, col)
};

struct ScanOrder3D {
  int n = 0;
  std::vector<std::array<int, 3>> order;  // (row, col, layer)
};

// JPEG zig-zag generalised to any n: anti-diagonals d = row + col in
// increasing order, odd d walked with row increasing, even d with row
// decreasing, so (0,1) precedes (1,0).
ScanOrder2D zigzag_order(int n);

// Layer 0's zig-zag, then layer 1's, ... then layer n - 1's.
ScanOrder3D layered_order(int n);

std::vector<std::int32_t> serialize(const LevelBlock2D& block, const ScanOrder2D& order);
std::vector<std::int32_t> serialize(const LevelBlock3D& block, const ScanOrder3D& order);
LevelBlock2D deserialize(std::span<const std::int32_t> v, const ScanOrder2D& order);
LevelBlock3D deserialize(std::span<const std::int32_t> v, const ScanOrder3D& order);

}  // namespace dct3d
