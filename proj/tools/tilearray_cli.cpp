// Command line front end. Subcommands are wired up as the library grows;
// this stub keeps the target linking while modules land.
#include "tilearray/tile.hpp"

#include <cstdio>

int main() {
  const tilearray::TilePose p = tilearray::neutral_pose();
  const auto ik = tilearray::inverse_kinematics(p, tilearray::TileGeometry{});
  std::printf("tilearray_cli: neutral pose feasible = %d\n", ik.has_value() ? 1 : 0);
  return 0;
}
