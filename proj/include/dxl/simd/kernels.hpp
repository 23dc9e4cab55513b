#pragma once
#include <cstddef>

namespace dxl::simd {

// Hot inner-loop kernels. Scalar reference implementations always exist; an
// AVX2 (x86) or NEON (aarch64) variant is selected once at startup by cpuid.
// The cosine uses one shared polynomial so scalar and vector lanes agree
// bit-for-bit; reductions (dot) agree to rounding.
struct Kernels {
    // out[k] *= cos(a * t[k])
    void (*cos_prod_row)(const double* t, std::size_t n, double a, double* out);
    // out[k] += w * cos(a * t[k])
    void (*cos_accum_row)(const double* t, std::size_t n, double a, double w, double* out);
    // plain dot product
    double (*dot)(const double* a, const double* b, std::size_t n);
    // y[k] += a * x[k]
    void (*axpy)(double a, const double* x, std::size_t n, double* y);
    const char* name;
};

// Runtime-selected kernel table (stable for the lifetime of the process).
const Kernels& kernels();

// Force a specific lane; used by the equivalence tests.
const Kernels& scalar_kernels();
const Kernels& vector_kernels();  // == scalar_kernels() when no vector ISA
bool vector_lane_available();

// Range-reduced polynomial cosine (the scalar lane of cos_prod_row).
// |err| <= ~5e-13 for |x| <= 1e5.
double vcos(double x);

} // namespace dxl::simd
