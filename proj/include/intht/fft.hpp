#pragma once

// Iterative radix-2 FFT on split real/imaginary arrays, power-of-two sizes
// only.  A plan caches the bit-reversal permutation and twiddle factors for
// one transform size.  Circular convolution of two real vectors is done with
// a single packed complex transform (x in the real lane, y in the imaginary
// lane) plus one inverse transform.

#include <cstddef>
#include <cstdint>
#include <vector>

namespace intht {

inline bool is_pow2(size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline size_t next_pow2(size_t n) {
  size_t b = 1;
  while (b < n) b <<= 1;
  return b;
}

struct FftPlan {
  size_t n = 0;
  std::vector<uint32_t> bitrev;   // bit-reversal permutation of [0, n)
  std::vector<double> tw_re;      // twiddles e^{-2*pi*i*j/n}, j in [0, n/2)
  std::vector<double> tw_im;

  FftPlan() = default;
  explicit FftPlan(size_t size);

  // In-place transform of (re, im), both length n.  inverse=true applies the
  // conjugate transform and the 1/n scale.
  void fft(double* re, double* im, bool inverse) const;
};

// out[q] = sum_t x[t] * y[(q - t) mod n]; x, y, out have length plan.n.
// out may not alias x or y.
void circular_convolve(const FftPlan& plan, const double* x, const double* y, double* out);

// Convenience overload allocating the result.
std::vector<double> circular_convolve(const std::vector<double>& x, const std::vector<double>& y);

// Forward transform of a real vector into split complex spectra.
void real_fft(const FftPlan& plan, const double* x, double* re, double* im);

// Forward transform of two real vectors with one complex FFT.  Unpacks the
// spectra of x (into xre/xim) and y (into yre/yim), each length n.
void real_fft_pair(const FftPlan& plan, const double* x, const double* y,
                   double* xre, double* xim, double* yre, double* yim,
                   double* scratch_re, double* scratch_im);

}  // namespace intht
