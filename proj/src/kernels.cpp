// SPDX-License-Identifier: Apache-2.0
#include "pingloc/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace pingloc::kernels {

namespace {

using cd = std::complex<double>;

cd cdot_scalar(const cd* x, const cd* y, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    const double yr = y[i].real(), yi = y[i].imag();
    re += xr * yr + xi * yi;
    im += xr * yi - xi * yr;
  }
  return {re, im};
}

void caxpy_scalar(cd a, const cd* x, cd* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void cscale_scalar(cd a, const cd* x, cd* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a * x[i];
}

void cexp_ramp_scalar(double phase0, double step, cd* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::polar(1.0, phase0 + double(i) * step);
}

double norm_sq_scalar(const cd* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return acc;
}

Isa detect_best() {
#if defined(PINGLOC_BUILD_AVX2)
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return Isa::Avx2;
#endif
#if defined(PINGLOC_BUILD_NEON)
  return Isa::Neon;  // NEON is baseline on aarch64
#endif
  return Isa::Scalar;
}

const detail::KernelTable* table_for(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return &detail::scalar_table();
    case Isa::Avx2:
#if defined(PINGLOC_BUILD_AVX2)
      return &detail::avx2_table();
#else
      return nullptr;
#endif
    case Isa::Neon:
#if defined(PINGLOC_BUILD_NEON)
      return &detail::neon_table();
#else
      return nullptr;
#endif
  }
  return nullptr;
}

struct Dispatch {
  Isa isa;
  const detail::KernelTable* table;
  Dispatch() : isa(detect_best()), table(table_for(isa)) {}
};

Dispatch& dispatch() {
  static Dispatch d;
  return d;
}

}  // namespace

namespace detail {
const KernelTable& scalar_table() {
  static const KernelTable t{cdot_scalar, caxpy_scalar, cscale_scalar, cexp_ramp_scalar,
                             norm_sq_scalar};
  return t;
}
}  // namespace detail

Isa active_isa() { return dispatch().isa; }

bool isa_supported(Isa isa) {
  if (isa == Isa::Scalar) return true;
#if defined(PINGLOC_BUILD_AVX2)
  if (isa == Isa::Avx2) return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#endif
#if defined(PINGLOC_BUILD_NEON)
  if (isa == Isa::Neon) return true;
#endif
  return false;
}

void force_isa(Isa isa) {
  if (!isa_supported(isa)) throw std::invalid_argument("unsupported ISA: " + isa_name(isa));
  dispatch().isa = isa;
  dispatch().table = table_for(isa);
}

std::string isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "?";
}

cd cdot(std::span<const cd> x, std::span<const cd> y) {
  if (x.size() != y.size()) throw std::invalid_argument("cdot: length mismatch");
  return dispatch().table->cdot(x.data(), y.data(), x.size());
}

void caxpy(cd a, std::span<const cd> x, std::span<cd> y) {
  if (x.size() != y.size()) throw std::invalid_argument("caxpy: length mismatch");
  dispatch().table->caxpy(a, x.data(), y.data(), x.size());
}

void cscale(cd a, std::span<const cd> x, std::span<cd> out) {
  if (x.size() != out.size()) throw std::invalid_argument("cscale: length mismatch");
  dispatch().table->cscale(a, x.data(), out.data(), x.size());
}

void cexp_ramp(double phase0, double step, std::span<cd> out) {
  dispatch().table->cexp_ramp(phase0, step, out.data(), out.size());
}

double norm_sq(std::span<const cd> x) { return dispatch().table->norm_sq(x.data(), x.size()); }

}  // namespace pingloc::kernels
