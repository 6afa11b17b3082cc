#include "fft.hpp"

#include <cmath>

namespace spcalc {

void fft_pow2(cplx* a, int n, int sign) {
  // bit reversal
  for (int i = 1, j = 0; i < n; ++i) {
    int bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (int len = 2; len <= n; len <<= 1) {
    double ang = sign * kTwoPi / len;
    cplx wlen(std::cos(ang), std::sin(ang));
    for (int i = 0; i < n; i += len) {
      cplx w(1.0);
      for (int j = 0; j < len / 2; ++j) {
        cplx u = a[i + j];
        cplx v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

void dft_direct(const cplx* a, cplx* out, int n, int sign) {
  for (int k = 0; k < n; ++k) {
    cplx s = 0.0;
    for (int j = 0; j < n; ++j) {
      double ang = sign * kTwoPi * double(j) * double(k) / n;
      s += a[j] * cplx(std::cos(ang), std::sin(ang));
    }
    out[k] = s;
  }
}

}  // namespace spcalc
