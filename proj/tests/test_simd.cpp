#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "dxl/core/rng.hpp"
#include "dxl/simd/kernels.hpp"

using namespace dxl;

TEST_CASE("vcos matches std::cos") {
    RngStream rng(7, "vcos-test");
    double worst = 0.0;
    for (int k = 0; k < 200000; ++k) {
        double x = rng.uniform(-1e4, 1e4);
        worst = std::max(worst, std::fabs(simd::vcos(x) - std::cos(x)));
    }
    for (double x : {0.0, 1e-12, -1e-12, M_PI / 2, M_PI, 2 * M_PI, -M_PI / 4})
        worst = std::max(worst, std::fabs(simd::vcos(x) - std::cos(x)));
    CHECK(worst < 1e-12);
}

TEST_CASE("scalar and vector cosine lanes agree bitwise") {
    const auto& sc = simd::scalar_kernels();
    const auto& vec = simd::vector_kernels();
    INFO("vector lane: ", vec.name);
    RngStream rng(11, "lane-test");
    std::vector<double> t(1003);
    for (auto& v : t) v = rng.uniform(0.0, 50.0);
    for (double a : {0.0, 0.37, -12.9, 831.0}) {
        std::vector<double> o1(t.size(), 1.0), o2(t.size(), 1.0);
        sc.cos_prod_row(t.data(), t.size(), a, o1.data());
        vec.cos_prod_row(t.data(), t.size(), a, o2.data());
        CHECK(std::memcmp(o1.data(), o2.data(), t.size() * sizeof(double)) == 0);

        std::vector<double> a1(t.size(), 0.25), a2(t.size(), 0.25);
        sc.cos_accum_row(t.data(), t.size(), a, 1.7, a1.data());
        vec.cos_accum_row(t.data(), t.size(), a, 1.7, a2.data());
        CHECK(std::memcmp(a1.data(), a2.data(), t.size() * sizeof(double)) == 0);
    }
}

TEST_CASE("dot and axpy lanes agree to rounding") {
    const auto& sc = simd::scalar_kernels();
    const auto& vec = simd::vector_kernels();
    RngStream rng(13, "dot-test");
    for (std::size_t n : {1u, 7u, 64u, 1001u}) {
        std::vector<double> a(n), b(n), y1(n, 0.5), y2(n, 0.5);
        for (std::size_t k = 0; k < n; ++k) {
            a[k] = rng.uniform(-1.0, 1.0);
            b[k] = rng.uniform(-1.0, 1.0);
        }
        double d1 = sc.dot(a.data(), b.data(), n);
        double d2 = vec.dot(a.data(), b.data(), n);
        CHECK(std::fabs(d1 - d2) <= 1e-12 * (1.0 + std::fabs(d1)));
        sc.axpy(0.77, a.data(), n, y1.data());
        vec.axpy(0.77, a.data(), n, y2.data());
        for (std::size_t k = 0; k < n; ++k) CHECK(y1[k] == doctest::Approx(y2[k]).epsilon(1e-14));
    }
}

TEST_CASE("runtime dispatch picks a valid lane") {
    const auto& k = simd::kernels();
    bool known = std::string(k.name) == "scalar" || std::string(k.name) == "avx2" ||
                 std::string(k.name) == "neon";
    CHECK(known);
    if (simd::vector_lane_available()) CHECK(std::string(k.name) != "scalar");
}
