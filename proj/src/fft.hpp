#pragma once

#include "spcalc/common.hpp"

namespace spcalc {

// In-place radix-2 DFT, sign = -1 forward (e^{-2 pi i jk/n}), +1 inverse
// (no 1/n scaling). n must be a power of two.
void fft_pow2(cplx* a, int n, int sign);

// Direct DFT for arbitrary (small, odd) n: out[k] = sum_j a[j] e^{sign 2 pi i jk/n}.
void dft_direct(const cplx* a, cplx* out, int n, int sign);

}  // namespace spcalc
