// SPDX-License-Identifier: Apache-2.0
//
// Data-parallel inner loops used by channel synthesis and the grid-search
// estimator: conjugated complex dot products, complex axpy/scale, phase-ramp
// exponentials and squared norms. Each kernel has a scalar reference
// implementation and SIMD variants (AVX2 on x86-64, NEON on aarch64) selected
// once at runtime from CPU capabilities. The scalar path is the definition;
// SIMD variants are equivalence-tested against it.
#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>

namespace pingloc::kernels {

enum class Isa { Scalar, Avx2, Neon };

// ISA chosen at startup (best supported). force_isa overrides it, throwing
// std::invalid_argument if the requested ISA is not available on this CPU.
Isa active_isa();
void force_isa(Isa isa);
bool isa_supported(Isa isa);
std::string isa_name(Isa isa);

// sum_i conj(x[i]) * y[i]
std::complex<double> cdot(std::span<const std::complex<double>> x,
                          std::span<const std::complex<double>> y);

// y[i] += a * x[i]
void caxpy(std::complex<double> a, std::span<const std::complex<double>> x,
           std::span<std::complex<double>> y);

// out[i] = a * x[i]
void cscale(std::complex<double> a, std::span<const std::complex<double>> x,
            std::span<std::complex<double>> out);

// out[k] = exp(j * (phase0 + k * step))
void cexp_ramp(double phase0, double step, std::span<std::complex<double>> out);

// sum_i |x[i]|^2
double norm_sq(std::span<const std::complex<double>> x);

namespace detail {
struct KernelTable {
  std::complex<double> (*cdot)(const std::complex<double>*, const std::complex<double>*,
                               std::size_t);
  void (*caxpy)(std::complex<double>, const std::complex<double>*, std::complex<double>*,
                std::size_t);
  void (*cscale)(std::complex<double>, const std::complex<double>*, std::complex<double>*,
                 std::size_t);
  void (*cexp_ramp)(double, double, std::complex<double>*, std::size_t);
  double (*norm_sq)(const std::complex<double>*, std::size_t);
};
const KernelTable& scalar_table();
#if defined(PINGLOC_BUILD_AVX2)
const KernelTable& avx2_table();
#endif
#if defined(PINGLOC_BUILD_NEON)
const KernelTable& neon_table();
#endif
}  // namespace detail

}  // namespace pingloc::kernels
