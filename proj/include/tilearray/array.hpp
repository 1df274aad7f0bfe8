#pragma once

#include "tilearray/geometry.hpp"
#include "tilearray/tile.hpp"

#include <stdexcept>

namespace tilearray {

// Rectangular array of tiles on a square pitch. Row 0 is the north edge and
// column 0 the west edge; the array is centred on the world origin.
struct ArrayConfig {
  int rows = 2;
  int cols = 2;
  double inter_tile_distance = 261.0;  // centre-to-centre pitch [mm]
  double material_length = 150.0;      // inter-tile strip length [mm]
  TileGeometry tile;

  void validate() const {
    if (rows < 1 || cols < 1) throw std::invalid_argument("array dims must be >= 1");
    if (inter_tile_distance <= 0.0) throw std::invalid_argument("pitch must be > 0");
    if (material_length <= 0.0) throw std::invalid_argument("material length must be > 0");
  }
};

// Base-frame origin of tile (row, col) in world coordinates (z = 0 plane).
inline Vec2 tile_origin(const ArrayConfig& cfg, int row, int col) {
  const double d = cfg.inter_tile_distance;
  return Vec2{(col - (cfg.cols - 1) / 2.0) * d, ((cfg.rows - 1) / 2.0 - row) * d};
}

}  // namespace tilearray
