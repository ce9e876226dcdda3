#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace warpcurv::kernels {

// Dense double-precision primitives used by tensor contractions.
// M is row-major n x n.
struct KernelTable {
  const char* name;
  double (*dot)(const double* a, const double* b, std::size_t n);
  void (*matvec)(const double* M, const double* x, double* y, std::size_t n);
  double (*quadratic_form)(const double* M, const double* x, std::size_t n);
};

const KernelTable& scalar();
// nullptr when not compiled in or not supported by the running CPU.
const KernelTable* avx2();
const KernelTable* neon();

// Every table usable on this machine, scalar first.
std::vector<const KernelTable*> available();

// Widest supported table, unless WARPCURV_KERNELS names another one
// ("scalar", "avx2", "neon"). Resolved once.
const KernelTable& active();

}  // namespace warpcurv::kernels
