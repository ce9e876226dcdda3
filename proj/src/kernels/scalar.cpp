#include "warpcurv/kernels.hpp"

namespace warpcurv::kernels {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void matvec_scalar(const double* M, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = dot_scalar(M + i * n, x, n);
}

double quadratic_scalar(const double* M, const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] == 0.0) continue;
    s += x[i] * dot_scalar(M + i * n, x, n);
  }
  return s;
}

const KernelTable kScalar{"scalar", dot_scalar, matvec_scalar, quadratic_scalar};

}  // namespace

const KernelTable& scalar() { return kScalar; }

}  // namespace warpcurv::kernels
