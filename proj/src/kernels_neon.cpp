// SPDX-License-Identifier: Apache-2.0
//
// NEON variants for aarch64. One float64x2_t holds a single complex double
// as [re, im]; loops mirror the AVX2 translation unit.
#include "pingloc/kernels.hpp"

#if defined(__aarch64__)
#include <arm_neon.h>

#include <cmath>

namespace pingloc::kernels::detail {

namespace {

using cd = std::complex<double>;

inline float64x2_t cmul(float64x2_t a, float64x2_t b) {
  // (ar*br - ai*bi, ar*bi + ai*br)
  const float64x2_t ar = vdupq_laneq_f64(a, 0);
  const float64x2_t ai = vdupq_laneq_f64(a, 1);
  const float64x2_t bs = vextq_f64(b, b, 1);  // [bi, br]
  float64x2_t re_im = vmulq_f64(ar, b);
  const float64x2_t cross = vmulq_f64(ai, bs);
  const float64x2_t signs = {-1.0, 1.0};
  return vfmaq_f64(re_im, cross, signs);
}

cd cdot_neon(const cd* x, const cd* y, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t vx = vld1q_f64(reinterpret_cast<const double*>(x + i));
    const float64x2_t vy = vld1q_f64(reinterpret_cast<const double*>(y + i));
    // conj(x)*y = (xr*yr + xi*yi, xr*yi - xi*yr)
    const float64x2_t xr = vdupq_laneq_f64(vx, 0);
    const float64x2_t xi = vdupq_laneq_f64(vx, 1);
    const float64x2_t ys = vextq_f64(vy, vy, 1);
    float64x2_t term = vmulq_f64(xr, vy);
    const float64x2_t signs = {1.0, -1.0};
    term = vfmaq_f64(term, vmulq_f64(xi, ys), signs);
    acc = vaddq_f64(acc, term);
  }
  return {vgetq_lane_f64(acc, 0), vgetq_lane_f64(acc, 1)};
}

void caxpy_neon(cd a, const cd* x, cd* y, std::size_t n) {
  const float64x2_t va = vld1q_f64(reinterpret_cast<const double*>(&a));
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t vx = vld1q_f64(reinterpret_cast<const double*>(x + i));
    float64x2_t vy = vld1q_f64(reinterpret_cast<double*>(y + i));
    vy = vaddq_f64(vy, cmul(va, vx));
    vst1q_f64(reinterpret_cast<double*>(y + i), vy);
  }
}

void cscale_neon(cd a, const cd* x, cd* out, std::size_t n) {
  const float64x2_t va = vld1q_f64(reinterpret_cast<const double*>(&a));
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t vx = vld1q_f64(reinterpret_cast<const double*>(x + i));
    vst1q_f64(reinterpret_cast<double*>(out + i), cmul(va, vx));
  }
}

void cexp_ramp_neon(double phase0, double step, cd* out, std::size_t n) {
  constexpr std::size_t kBlock = 64;
  std::size_t done = 0;
  while (done < n) {
    const std::size_t m = std::min(kBlock, n - done);
    const double p0 = phase0 + double(done) * step;
    cd r = std::polar(1.0, p0);
    const cd w = std::polar(1.0, step);
    const float64x2_t vw = vld1q_f64(reinterpret_cast<const double*>(&w));
    float64x2_t vr = vld1q_f64(reinterpret_cast<const double*>(&r));
    for (std::size_t i = 0; i < m; ++i) {
      vst1q_f64(reinterpret_cast<double*>(out + done + i), vr);
      vr = cmul(vr, vw);
    }
    done += m;
  }
}

double norm_sq_neon(const cd* x, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t vx = vld1q_f64(reinterpret_cast<const double*>(x + i));
    acc = vfmaq_f64(acc, vx, vx);
  }
  return vaddvq_f64(acc);
}

}  // namespace

const KernelTable& neon_table() {
  static const KernelTable t{cdot_neon, caxpy_neon, cscale_neon, cexp_ramp_neon, norm_sq_neon};
  return t;
}

}  // namespace pingloc::kernels::detail

#endif  // __aarch64__
