#include "warpcurv/tensor.hpp"

#include <algorithm>
#include <cmath>

#include "warpcurv/errors.hpp"

namespace warpcurv {

CurvatureTensor::CurvatureTensor(int dim, std::string frame, Point point)
    : dim_(dim), frame_(std::move(frame)), point_(point) {
  if (dim < 1) throw ConfigError("tensor dimension must be positive");
  const auto n = static_cast<std::size_t>(dim);
  data_.assign(n * n * n * n, 0.0);
}

void CurvatureTensor::set_with_symmetries(int i, int j, int k, int l, double value) {
  (*this)(i, j, k, l) = value;
  (*this)(j, i, k, l) = -value;
  (*this)(i, j, l, k) = -value;
  (*this)(j, i, l, k) = value;
  (*this)(k, l, i, j) = value;
  (*this)(l, k, i, j) = -value;
  (*this)(k, l, j, i) = -value;
  (*this)(l, k, j, i) = value;
}

double CurvatureTensor::symmetry_defect() const {
  double worst = 0.0;
  const int n = dim_;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double v = (*this)(i, j, k, l);
          worst = std::max(worst, std::abs(v + (*this)(j, i, k, l)));
          worst = std::max(worst, std::abs(v + (*this)(i, j, l, k)));
          worst = std::max(worst, std::abs(v - (*this)(k, l, i, j)));
        }
  return worst;
}

double CurvatureTensor::bianchi_defect() const {
  double worst = 0.0;
  const int n = dim_;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double s = (*this)(i, j, k, l) + (*this)(j, k, i, l) + (*this)(k, i, j, l);
          worst = std::max(worst, std::abs(s));
        }
  return worst;
}

double CurvatureTensor::max_abs() const {
  double worst = 0.0;
  for (double v : data_) worst = std::max(worst, std::abs(v));
  return worst;
}

double CurvatureTensor::max_abs_diff(const CurvatureTensor& other) const {
  if (other.dim_ != dim_) throw ConfigError("tensor dimension mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < data_.size(); ++i) {
    worst = std::max(worst, std::abs(data_[i] - other.data_[i]));
  }
  return worst;
}

}  // namespace warpcurv
