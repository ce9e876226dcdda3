#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "warpcurv/point.hpp"

namespace warpcurv {

// Dense (4,0) curvature tensor R(Y_i,Y_j,Y_k,Y_l) in an orthonormal frame.
// Indices are 0-based; storage is row-major over (i,j,k,l).
class CurvatureTensor {
 public:
  CurvatureTensor() = default;
  explicit CurvatureTensor(int dim, std::string frame = "Y", Point point = {});

  int dim() const { return dim_; }
  const std::string& frame() const { return frame_; }
  const Point& point() const { return point_; }
  void set_point(Point p) { point_ = p; }

  double& operator()(int i, int j, int k, int l) { return data_[index(i, j, k, l)]; }
  double operator()(int i, int j, int k, int l) const { return data_[index(i, j, k, l)]; }

  // Writes value at (i,j,k,l) and its seven images under the pair
  // antisymmetries and the pair exchange.
  void set_with_symmetries(int i, int j, int k, int l, double value);

  // Row-major dim^2 x dim^2 view: M[(i,j),(k,l)] = R_ijkl.
  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  // Max |violation| of R_ijkl = -R_jikl = -R_ijlk = R_klij.
  double symmetry_defect() const;
  // Max |R_ijkl + R_jkil + R_kijl|.
  double bianchi_defect() const;
  double max_abs() const;
  double max_abs_diff(const CurvatureTensor& other) const;

 private:
  std::size_t index(int i, int j, int k, int l) const {
    const auto n = static_cast<std::size_t>(dim_);
    return ((static_cast<std::size_t>(i) * n + j) * n + k) * n + l;
  }

  int dim_ = 0;
  std::string frame_ = "Y";
  Point point_{};
  std::vector<double> data_;
};

}  // namespace warpcurv
