#include "kernels_internal.hpp"

#if defined(__aarch64__)
#include <arm_neon.h>

namespace warpcurv::kernels::detail {
namespace {

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double s = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void matvec_neon(const double* M, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = dot_neon(M + i * n, x, n);
}

double quadratic_neon(const double* M, const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] == 0.0) continue;
    s += x[i] * dot_neon(M + i * n, x, n);
  }
  return s;
}

const KernelTable kNeon{"neon", dot_neon, matvec_neon, quadratic_neon};

}  // namespace

const KernelTable* neon_table() { return &kNeon; }

}  // namespace warpcurv::kernels::detail

#else

namespace warpcurv::kernels::detail {
const KernelTable* neon_table() { return nullptr; }
}  // namespace warpcurv::kernels::detail

#endif
