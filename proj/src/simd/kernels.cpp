#include "dxl/simd/kernels.hpp"

#include <cmath>

#if defined(__x86_64__) || defined(_M_X64)
#define DXL_X86 1
#include <immintrin.h>
#endif
#if defined(__aarch64__) || defined(__ARM_NEON)
#define DXL_NEON 1
#include <arm_neon.h>
#endif

namespace dxl::simd {
namespace {

// pi/2 split (high/mid/low) for Cody-Waite reduction.
constexpr double kPio2Hi = 1.57079632673412561417e+00;
constexpr double kPio2Mid = 6.07710050630396597660e-11;
constexpr double kPio2Lo = 2.02226624871116645580e-21;
constexpr double kTwoOverPi = 6.36619772367581382433e-01;

// minimax coefficients for sin/cos on [-pi/4, pi/4]
constexpr double kSinC[6] = {
    1.58962301576546568060e-10, -2.50507477628578072866e-8,
    2.75573136213857245213e-6,  -1.98412698295895385996e-4,
    8.33333333332211858878e-3,  -1.66666666666666307295e-1};
constexpr double kCosC[6] = {
    -1.13585365213876817300e-11, 2.08757008419747316778e-9,
    -2.75573141792967388112e-7,  2.48015872888517179954e-5,
    -1.38888888888730564116e-3,  4.16666666666665929218e-2};

// Scalar lane. std::fma keeps the arithmetic identical to the fused vector
// lanes so both produce the same bits.
double cos_scalar(double x) {
    x = std::fabs(x);
    double k = std::floor(std::fma(x, kTwoOverPi, 0.5));
    double y = std::fma(-k, kPio2Hi, x);
    y = std::fma(-k, kPio2Mid, y);
    y = std::fma(-k, kPio2Lo, y);
    double q = k - 4.0 * std::floor(k * 0.25);  // quadrant 0..3, exact

    double z = y * y;
    double ps = kSinC[0];
    ps = std::fma(ps, z, kSinC[1]);
    ps = std::fma(ps, z, kSinC[2]);
    ps = std::fma(ps, z, kSinC[3]);
    ps = std::fma(ps, z, kSinC[4]);
    ps = std::fma(ps, z, kSinC[5]);
    double s = std::fma(y * z, ps, y);  // sin(y)

    double pc = kCosC[0];
    pc = std::fma(pc, z, kCosC[1]);
    pc = std::fma(pc, z, kCosC[2]);
    pc = std::fma(pc, z, kCosC[3]);
    pc = std::fma(pc, z, kCosC[4]);
    pc = std::fma(pc, z, kCosC[5]);
    double c = std::fma(z * z, pc, std::fma(z, -0.5, 1.0));  // cos(y)

    if (q == 0.0) return c;
    if (q == 1.0) return -s;
    if (q == 2.0) return -c;
    return s;
}

void cos_prod_row_scalar(const double* t, std::size_t n, double a, double* out) {
    for (std::size_t k = 0; k < n; ++k) out[k] *= cos_scalar(a * t[k]);
}

void cos_accum_row_scalar(const double* t, std::size_t n, double a, double w, double* out) {
    for (std::size_t k = 0; k < n; ++k) out[k] = std::fma(w, cos_scalar(a * t[k]), out[k]);
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s = std::fma(a[k], b[k], s);
    return s;
}

void axpy_scalar(double a, const double* x, std::size_t n, double* y) {
    for (std::size_t k = 0; k < n; ++k) y[k] = std::fma(a, x[k], y[k]);
}

constexpr Kernels kScalar{cos_prod_row_scalar, cos_accum_row_scalar, dot_scalar, axpy_scalar, "scalar"};

#if DXL_X86

__attribute__((target("avx2,fma"))) __m256d cos_avx2(__m256d x) {
    const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffll));
    x = _mm256_and_pd(x, abs_mask);
    __m256d k = _mm256_floor_pd(_mm256_fmadd_pd(x, _mm256_set1_pd(kTwoOverPi), _mm256_set1_pd(0.5)));
    __m256d y = _mm256_fmadd_pd(k, _mm256_set1_pd(-kPio2Hi), x);
    y = _mm256_fmadd_pd(k, _mm256_set1_pd(-kPio2Mid), y);
    y = _mm256_fmadd_pd(k, _mm256_set1_pd(-kPio2Lo), y);
    __m256d q = _mm256_sub_pd(k, _mm256_mul_pd(_mm256_set1_pd(4.0),
                  _mm256_floor_pd(_mm256_mul_pd(k, _mm256_set1_pd(0.25)))));

    __m256d z = _mm256_mul_pd(y, y);
    __m256d ps = _mm256_set1_pd(kSinC[0]);
    for (int i = 1; i < 6; ++i) ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(kSinC[i]));
    __m256d s = _mm256_fmadd_pd(_mm256_mul_pd(y, z), ps, y);

    __m256d pc = _mm256_set1_pd(kCosC[0]);
    for (int i = 1; i < 6; ++i) pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(kCosC[i]));
    __m256d c = _mm256_fmadd_pd(_mm256_mul_pd(z, z), pc,
                  _mm256_fmadd_pd(z, _mm256_set1_pd(-0.5), _mm256_set1_pd(1.0)));

    __m256d m1 = _mm256_cmp_pd(q, _mm256_set1_pd(1.0), _CMP_EQ_OQ);
    __m256d m2 = _mm256_cmp_pd(q, _mm256_set1_pd(2.0), _CMP_EQ_OQ);
    __m256d m3 = _mm256_cmp_pd(q, _mm256_set1_pd(3.0), _CMP_EQ_OQ);
    __m256d r = c;                                             // q == 0
    r = _mm256_blendv_pd(r, _mm256_sub_pd(_mm256_setzero_pd(), s), m1);
    r = _mm256_blendv_pd(r, _mm256_sub_pd(_mm256_setzero_pd(), c), m2);
    r = _mm256_blendv_pd(r, s, m3);
    return r;
}

__attribute__((target("avx2,fma"))) void cos_prod_row_avx2(const double* t, std::size_t n,
                                                           double a, double* out) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        __m256d vt = _mm256_loadu_pd(t + k);
        __m256d c = cos_avx2(_mm256_mul_pd(va, vt));
        _mm256_storeu_pd(out + k, _mm256_mul_pd(_mm256_loadu_pd(out + k), c));
    }
    for (; k < n; ++k) out[k] *= cos_scalar(a * t[k]);
}

__attribute__((target("avx2,fma"))) void cos_accum_row_avx2(const double* t, std::size_t n,
                                                           double a, double w, double* out) {
    const __m256d va = _mm256_set1_pd(a);
    const __m256d vw = _mm256_set1_pd(w);
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        __m256d c = cos_avx2(_mm256_mul_pd(va, _mm256_loadu_pd(t + k)));
        _mm256_storeu_pd(out + k, _mm256_fmadd_pd(vw, c, _mm256_loadu_pd(out + k)));
    }
    for (; k < n; ++k) out[k] = std::fma(w, cos_scalar(a * t[k]), out[k]);
}

__attribute__((target("avx2,fma"))) double dot_avx2(const double* a, const double* b,
                                                    std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 8 <= n; k += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k + 4), _mm256_loadu_pd(b + k + 4), acc1);
    }
    for (; k + 4 <= n; k += 4)
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k), acc0);
    acc0 = _mm256_add_pd(acc0, acc1);
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc0);
    double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    for (; k < n; ++k) s = std::fma(a[k], b[k], s);
    return s;
}

__attribute__((target("avx2,fma"))) void axpy_avx2(double a, const double* x, std::size_t n,
                                                   double* y) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4)
        _mm256_storeu_pd(y + k, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + k), _mm256_loadu_pd(y + k)));
    for (; k < n; ++k) y[k] = std::fma(a, x[k], y[k]);
}

constexpr Kernels kAvx2{cos_prod_row_avx2, cos_accum_row_avx2, dot_avx2, axpy_avx2, "avx2"};

#endif  // DXL_X86

#if DXL_NEON

float64x2_t cos_neon(float64x2_t x) {
    x = vabsq_f64(x);
    float64x2_t k = vrndmq_f64(vfmaq_f64(vdupq_n_f64(0.5), x, vdupq_n_f64(kTwoOverPi)));
    float64x2_t y = vfmaq_f64(x, k, vdupq_n_f64(-kPio2Hi));
    y = vfmaq_f64(y, k, vdupq_n_f64(-kPio2Mid));
    y = vfmaq_f64(y, k, vdupq_n_f64(-kPio2Lo));
    float64x2_t q = vsubq_f64(k, vmulq_f64(vdupq_n_f64(4.0),
                      vrndmq_f64(vmulq_f64(k, vdupq_n_f64(0.25)))));

    float64x2_t z = vmulq_f64(y, y);
    float64x2_t ps = vdupq_n_f64(kSinC[0]);
    for (int i = 1; i < 6; ++i) ps = vfmaq_f64(vdupq_n_f64(kSinC[i]), ps, z);
    float64x2_t s = vfmaq_f64(y, vmulq_f64(y, z), ps);

    float64x2_t pc = vdupq_n_f64(kCosC[0]);
    for (int i = 1; i < 6; ++i) pc = vfmaq_f64(vdupq_n_f64(kCosC[i]), pc, z);
    float64x2_t c = vfmaq_f64(vfmaq_f64(vdupq_n_f64(1.0), z, vdupq_n_f64(-0.5)),
                              vmulq_f64(z, z), pc);

    uint64x2_t m1 = vceqq_f64(q, vdupq_n_f64(1.0));
    uint64x2_t m2 = vceqq_f64(q, vdupq_n_f64(2.0));
    uint64x2_t m3 = vceqq_f64(q, vdupq_n_f64(3.0));
    float64x2_t r = c;
    r = vbslq_f64(m1, vnegq_f64(s), r);
    r = vbslq_f64(m2, vnegq_f64(c), r);
    r = vbslq_f64(m3, s, r);
    return r;
}

void cos_prod_row_neon(const double* t, std::size_t n, double a, double* out) {
    const float64x2_t va = vdupq_n_f64(a);
    std::size_t k = 0;
    for (; k + 2 <= n; k += 2) {
        float64x2_t c = cos_neon(vmulq_f64(va, vld1q_f64(t + k)));
        vst1q_f64(out + k, vmulq_f64(vld1q_f64(out + k), c));
    }
    for (; k < n; ++k) out[k] *= cos_scalar(a * t[k]);
}

void cos_accum_row_neon(const double* t, std::size_t n, double a, double w, double* out) {
    const float64x2_t va = vdupq_n_f64(a);
    const float64x2_t vw = vdupq_n_f64(w);
    std::size_t k = 0;
    for (; k + 2 <= n; k += 2) {
        float64x2_t c = cos_neon(vmulq_f64(va, vld1q_f64(t + k)));
        vst1q_f64(out + k, vfmaq_f64(vld1q_f64(out + k), vw, c));
    }
    for (; k < n; ++k) out[k] = std::fma(w, cos_scalar(a * t[k]), out[k]);
}

double dot_neon(const double* a, const double* b, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t k = 0;
    for (; k + 2 <= n; k += 2) acc = vfmaq_f64(acc, vld1q_f64(a + k), vld1q_f64(b + k));
    double s = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
    for (; k < n; ++k) s = std::fma(a[k], b[k], s);
    return s;
}

void axpy_neon(double a, const double* x, std::size_t n, double* y) {
    const float64x2_t va = vdupq_n_f64(a);
    std::size_t k = 0;
    for (; k + 2 <= n; k += 2)
        vst1q_f64(y + k, vfmaq_f64(vld1q_f64(y + k), va, vld1q_f64(x + k)));
    for (; k < n; ++k) y[k] = std::fma(a, x[k], y[k]);
}

constexpr Kernels kNeon{cos_prod_row_neon, cos_accum_row_neon, dot_neon, axpy_neon, "neon"};

#endif  // DXL_NEON

const Kernels* pick_vector() {
#if DXL_X86
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return &kAvx2;
#endif
#if DXL_NEON
    return &kNeon;
#endif
    return nullptr;
}

}  // namespace

const Kernels& scalar_kernels() { return kScalar; }

bool vector_lane_available() { return pick_vector() != nullptr; }

const Kernels& vector_kernels() {
    const Kernels* v = pick_vector();
    return v ? *v : kScalar;
}

const Kernels& kernels() {
    static const Kernels& selected = vector_kernels();
    return selected;
}

double vcos(double x) { return cos_scalar(x); }

} // namespace dxl::simd
