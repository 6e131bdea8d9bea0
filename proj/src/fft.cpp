#include "intht/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace intht {

FftPlan::FftPlan(size_t size) : n(size) {
  if (!is_pow2(n)) throw std::invalid_argument("fft size must be a power of two");
  bitrev.resize(n);
  uint32_t lg = 0;
  while ((size_t(1) << lg) < n) ++lg;
  for (size_t i = 0; i < n; ++i) {
    uint32_t r = 0;
    for (uint32_t bit = 0; bit < lg; ++bit)
      if (i & (size_t(1) << bit)) r |= uint32_t(1) << (lg - 1 - bit);
    bitrev[i] = r;
  }
  tw_re.resize(n / 2);
  tw_im.resize(n / 2);
  const double step = -2.0 * M_PI / static_cast<double>(n);
  for (size_t j = 0; j < n / 2; ++j) {
    tw_re[j] = std::cos(step * static_cast<double>(j));
    tw_im[j] = std::sin(step * static_cast<double>(j));
  }
}

void FftPlan::fft(double* re, double* im, bool inverse) const {
  // Bit-reverse reorder.
  for (size_t i = 0; i < n; ++i) {
    uint32_t j = bitrev[i];
    if (i < j) {
      std::swap(re[i], re[j]);
      std::swap(im[i], im[j]);
    }
  }
  const double sign = inverse ? -1.0 : 1.0;
  for (size_t len = 2; len <= n; len <<= 1) {
    const size_t half = len >> 1;
    const size_t stride = n / len;
    for (size_t base = 0; base < n; base += len) {
      const double* wr = tw_re.data();
      const double* wi = tw_im.data();
      for (size_t j = 0; j < half; ++j) {
        const double twr = wr[j * stride];
        const double twi = sign * wi[j * stride];
        const size_t a = base + j;
        const size_t b = a + half;
        const double xr = re[b] * twr - im[b] * twi;
        const double xi = re[b] * twi + im[b] * twr;
        re[b] = re[a] - xr;
        im[b] = im[a] - xi;
        re[a] += xr;
        im[a] += xi;
      }
    }
  }
  if (inverse) {
    const double inv = 1.0 / static_cast<double>(n);
    for (size_t i = 0; i < n; ++i) {
      re[i] *= inv;
      im[i] *= inv;
    }
  }
}

void real_fft(const FftPlan& plan, const double* x, double* re, double* im) {
  const size_t n = plan.n;
  for (size_t i = 0; i < n; ++i) {
    re[i] = x[i];
    im[i] = 0.0;
  }
  plan.fft(re, im, false);
}

void real_fft_pair(const FftPlan& plan, const double* x, const double* y,
                   double* xre, double* xim, double* yre, double* yim,
                   double* scratch_re, double* scratch_im) {
  const size_t n = plan.n;
  for (size_t i = 0; i < n; ++i) {
    scratch_re[i] = x[i];
    scratch_im[i] = y[i];
  }
  plan.fft(scratch_re, scratch_im, false);
  // Split Z[k] = X[k] + i*Y[k] using conjugate symmetry of real transforms.
  xre[0] = scratch_re[0];
  xim[0] = 0.0;
  yre[0] = scratch_im[0];
  yim[0] = 0.0;
  for (size_t k = 1; k < n; ++k) {
    const size_t kc = n - k;
    const double ar = scratch_re[k], ai = scratch_im[k];
    const double br = scratch_re[kc], bi = scratch_im[kc];
    xre[k] = 0.5 * (ar + br);
    xim[k] = 0.5 * (ai - bi);
    yre[k] = 0.5 * (ai + bi);
    yim[k] = -0.5 * (ar - br);
  }
}

void circular_convolve(const FftPlan& plan, const double* x, const double* y, double* out) {
  const size_t n = plan.n;
  std::vector<double> zr(n), zi(n);
  for (size_t i = 0; i < n; ++i) {
    zr[i] = x[i];
    zi[i] = y[i];
  }
  plan.fft(zr.data(), zi.data(), false);
  // With Z = X + iY for real x, y: X[k]Y[k] = (Z[k]^2 - conj(Z[n-k])^2) / (4i).
  std::vector<double> pr(n), pi(n);
  for (size_t k = 0; k < n; ++k) {
    const size_t kc = (n - k) & (n - 1);
    const double ar = zr[k], ai = zi[k];
    const double br = zr[kc], bi = -zi[kc];
    const double sr = ar * ar - ai * ai - (br * br - bi * bi);
    const double si = 2.0 * (ar * ai - br * bi);
    // Divide by 4i: (sr + i*si) / (4i) = (si - i*sr) / 4.
    pr[k] = 0.25 * si;
    pi[k] = -0.25 * sr;
  }
  plan.fft(pr.data(), pi.data(), true);
  for (size_t i = 0; i < n; ++i) out[i] = pr[i];
}

std::vector<double> circular_convolve(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("convolution size mismatch");
  FftPlan plan(x.size());
  std::vector<double> out(x.size());
  circular_convolve(plan, x.data(), y.data(), out.data());
  return out;
}

}  // namespace intht
