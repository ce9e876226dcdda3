#pragma once

#include <numbers>

namespace warpcurv {

// Chart coordinates (r, theta). theta only matters for the CH/H family.
struct Point {
  double r = 1.0;
  double theta = std::numbers::pi / 2;
};

}  // namespace warpcurv
