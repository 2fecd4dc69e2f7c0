// SPDX-License-Identifier: Apache-2.0
//
// AVX2/FMA variants. Layout: one __m256d holds two complex doubles as
// [re0, im0, re1, im1].
#include "pingloc/kernels.hpp"

#include <immintrin.h>

#include <cmath>

namespace pingloc::kernels::detail {

namespace {

using cd = std::complex<double>;

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

cd cdot_avx2(const cd* x, const cd* y, std::size_t n) {
  __m256d vre = _mm256_setzero_pd();
  __m256d vim = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d vx = _mm256_loadu_pd(reinterpret_cast<const double*>(x + i));
    const __m256d vy = _mm256_loadu_pd(reinterpret_cast<const double*>(y + i));
    // re lanes: xr*yr (even) + xi*yi (odd)
    vre = _mm256_fmadd_pd(vx, vy, vre);
    // im lanes: xr*yi (even), xi*yr (odd); combined below with alternating signs
    const __m256d vys = _mm256_permute_pd(vy, 0b0101);
    vim = _mm256_fmadd_pd(vx, vys, vim);
  }
  const __m256d signs = _mm256_setr_pd(1.0, -1.0, 1.0, -1.0);
  double re = hsum(vre);
  double im = hsum(_mm256_mul_pd(vim, signs));
  for (; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    const double yr = y[i].real(), yi = y[i].imag();
    re += xr * yr + xi * yi;
    im += xr * yi - xi * yr;
  }
  return {re, im};
}

void caxpy_avx2(cd a, const cd* x, cd* y, std::size_t n) {
  const __m256d var = _mm256_set1_pd(a.real());
  const __m256d vai = _mm256_set1_pd(a.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d vx = _mm256_loadu_pd(reinterpret_cast<const double*>(x + i));
    const __m256d vxs = _mm256_permute_pd(vx, 0b0101);
    // even: ar*xr - ai*xi, odd: ar*xi + ai*xr
    const __m256d prod = _mm256_fmaddsub_pd(var, vx, _mm256_mul_pd(vai, vxs));
    __m256d vy = _mm256_loadu_pd(reinterpret_cast<double*>(y + i));
    vy = _mm256_add_pd(vy, prod);
    _mm256_storeu_pd(reinterpret_cast<double*>(y + i), vy);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void cscale_avx2(cd a, const cd* x, cd* out, std::size_t n) {
  const __m256d var = _mm256_set1_pd(a.real());
  const __m256d vai = _mm256_set1_pd(a.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d vx = _mm256_loadu_pd(reinterpret_cast<const double*>(x + i));
    const __m256d vxs = _mm256_permute_pd(vx, 0b0101);
    const __m256d prod = _mm256_fmaddsub_pd(var, vx, _mm256_mul_pd(vai, vxs));
    _mm256_storeu_pd(reinterpret_cast<double*>(out + i), prod);
  }
  for (; i < n; ++i) out[i] = a * x[i];
}

// Rotation recurrence, two lanes at a stride of 2*step, re-synced from libm
// every block to keep the drift below ~1e-15.
void cexp_ramp_avx2(double phase0, double step, cd* out, std::size_t n) {
  constexpr std::size_t kBlock = 64;
  std::size_t done = 0;
  while (done < n) {
    const std::size_t m = std::min(kBlock, n - done);
    const double p0 = phase0 + double(done) * step;
    const cd w2 = std::polar(1.0, 2.0 * step);
    const __m256d vwr = _mm256_set1_pd(w2.real());
    const __m256d vwi = _mm256_set1_pd(w2.imag());
    cd seed[2] = {std::polar(1.0, p0), std::polar(1.0, p0 + step)};
    __m256d vr = _mm256_loadu_pd(reinterpret_cast<const double*>(seed));
    std::size_t i = 0;
    for (; i + 2 <= m; i += 2) {
      _mm256_storeu_pd(reinterpret_cast<double*>(out + done + i), vr);
      const __m256d vrs = _mm256_permute_pd(vr, 0b0101);
      vr = _mm256_fmaddsub_pd(vwr, vr, _mm256_mul_pd(vwi, vrs));
    }
    for (; i < m; ++i) out[done + i] = std::polar(1.0, p0 + double(i) * step);
    done += m;
  }
}

double norm_sq_avx2(const cd* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d vx = _mm256_loadu_pd(reinterpret_cast<const double*>(x + i));
    acc = _mm256_fmadd_pd(vx, vx, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return s;
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable t{cdot_avx2, caxpy_avx2, cscale_avx2, cexp_ramp_avx2, norm_sq_avx2};
  return t;
}

}  // namespace pingloc::kernels::detail
