#pragma once

#include "warpcurv/kernels.hpp"

namespace warpcurv::kernels::detail {

const KernelTable* avx2_table();
const KernelTable* neon_table();

}  // namespace warpcurv::kernels::detail
