#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "dxl/core/rng.hpp"
#include "dxl/model/anisotropy.hpp"
#include "dxl/model/dipolar.hpp"

using namespace dxl;

TEST_CASE("lambda parameterization") {
    auto g = parameterize_lambda(0.0);
    CHECK(g.x == doctest::Approx(1.0 / 3).epsilon(1e-15));
    CHECK(g.y == doctest::Approx(1.0 / 3).epsilon(1e-15));
    CHECK(g.z == doctest::Approx(1.0 / 3).epsilon(1e-15));
    auto ising = parameterize_lambda(-1.0);
    CHECK(ising.x == 0.0);
    CHECK(ising.y == 0.0);
    CHECK(ising.z == 1.0);
    auto xy = parameterize_lambda(0.5);
    CHECK(xy.x == 0.5);
    CHECK(xy.z == 0.0);
    CHECK_THROWS_AS(parameterize_lambda(std::numeric_limits<double>::quiet_NaN()), InputError);
}

TEST_CASE("theta parameterization") {
    auto ising = parameterize_theta(-M_PI / 4);
    CHECK(ising.x == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(ising.z == doctest::Approx(1.0).epsilon(1e-15));
    auto heis = parameterize_theta(0.0);
    CHECK(heis.x == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-15));
    CHECK(heis.z == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-15));
    auto xy = parameterize_theta(M_PI / 4);
    CHECK(xy.x == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::fabs(xy.z) < 1e-15);
    CHECK_THROWS_AS(parameterize_theta(std::numeric_limits<double>::infinity()), InputError);
}

TEST_CASE("g(theta + pi) = -g(theta)") {
    for (double th = -3.0; th < 3.0; th += 0.17) {
        auto a = parameterize_theta(th);
        auto b = parameterize_theta(th + M_PI);
        CHECK(std::fabs(a.x + b.x) < 1e-15);
        CHECK(std::fabs(a.y + b.y) < 1e-15);
        CHECK(std::fabs(a.z + b.z) < 1e-15);
    }
}

TEST_CASE("lambda and theta agree on named Hamiltonians up to positive scale") {
    auto check_prop = [](const AnisotropyVector& a, const AnisotropyVector& b) {
        // find a strictly positive scalar s with a = s b
        double s = 0.0;
        for (int c = 0; c < 3; ++c)
            if (std::fabs(b[c]) > 1e-14) s = a[c] / b[c];
        REQUIRE(s > 0.0);
        for (int c = 0; c < 3; ++c) CHECK(a[c] == doctest::Approx(s * b[c]).epsilon(1e-12));
    };
    check_prop(parameterize_lambda(-1.0), parameterize_theta(-M_PI / 4));  // Ising
    check_prop(parameterize_lambda(0.5), parameterize_theta(M_PI / 4));    // XY
}

TEST_CASE("position sampling basics") {
    DipolarModel model;
    auto g8 = sample_positions(8, model, 42);
    CHECK(g8.box_length == doctest::Approx(2.0).epsilon(1e-15));
    for (const auto& p : g8.positions)
        for (int c = 0; c < 3; ++c) {
            CHECK(p[c] >= 0.0);
            CHECK(p[c] < g8.box_length);
        }
    // bit-exact reconstruction from (N, model, seed)
    auto again = sample_positions(8, model, 42);
    CHECK(again.positions == g8.positions);

    auto g1 = sample_positions(1, model, 3);
    auto jm = coupling_matrix(g1, model);
    CHECK(jm.n == 1);
    CHECK(jm(0, 0) == 0.0);

    CHECK_THROWS_AS(sample_positions(0, model, 1), InputError);
}

TEST_CASE("nearest-neighbour statistics match the Poisson gas") {
    // mean NN distance of a unit-density Poisson gas: Gamma(4/3) (3/(4 pi))^(1/3)
    const double expected = std::tgamma(4.0 / 3.0) * std::cbrt(3.0 / (4.0 * M_PI));
    DipolarModel model;
    const std::size_t n = 1000;
    double acc = 0.0;
    std::size_t count = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        auto g = sample_positions(n, model, seed);
        for (std::size_t i = 0; i < n; ++i) {
            double best = 1e300;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                double r2 = 0.0;
                for (int c = 0; c < 3; ++c) {
                    double d = g.positions[i][c] - g.positions[j][c];
                    d -= g.box_length * std::round(d / g.box_length);
                    r2 += d * d;
                }
                best = std::min(best, r2);
            }
            acc += std::sqrt(best);
            ++count;
        }
    }
    double mean = acc / count;
    CHECK(std::fabs(mean / expected - 1.0) < 0.02);
}

namespace {
// pair with a prescribed separation in a 27-spin box (3a side leaves room for
// a full one-a separation without minimum-image wrapping); the 25 spectator
// spins sit far from the pair
EnsembleGeometry fixture_pair(const std::array<double, 3>& d) {
    EnsembleGeometry g;
    g.n = 27;
    g.box_length = 3.0;
    g.positions.assign(27, {0, 0, 0});
    g.positions[0] = {0.1, 0.1, 0.1};
    g.positions[1] = {0.1 + d[0], 0.1 + d[1], 0.1 + d[2]};
    for (int k = 0; k < 25; ++k)
        g.positions[2 + k] = {1.7 + 0.1 * (k % 5), 1.7 + 0.1 * ((k / 5) % 5), 2.5};
    return g;
}
} // namespace

TEST_CASE("dipolar coupling formula") {
    DipolarModel model;  // a = 1

    auto along_z = coupling_matrix(fixture_pair({0, 0, 1.0}), model);
    CHECK(along_z(0, 1) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(along_z(0, 1) == along_z(1, 0));

    auto along_x = coupling_matrix(fixture_pair({1.0, 0, 0}), model);
    CHECK(along_x(0, 1) == doctest::Approx(-1.0).epsilon(1e-12));

    const double c = 1.0 / std::sqrt(3.0);  // magic angle: 3 cos^2 - 1 = 0
    const double s = std::sqrt(1.0 - c * c);
    auto magic = coupling_matrix(fixture_pair({s, 0, c}), model);
    CHECK(std::fabs(magic(0, 1)) < 1e-12);
}

TEST_CASE("coincident spins error without cutoff, clamp with") {
    DipolarModel model;
    auto geom = fixture_pair({0, 0, 0});
    CHECK_THROWS_AS(coupling_matrix(geom, model), NumericalError);
    model.r_min = 0.2;
    auto clamped = coupling_matrix(fixture_pair({0, 0, 0.05}), model);
    // same orientation, radial factor evaluated at the clamped distance
    CHECK(clamped(0, 1) == doctest::Approx(2.0 / std::pow(0.2, 3)).epsilon(1e-12));
    // exact coincidence stays an error even with the cutoff (no orientation)
    CHECK_THROWS_AS(coupling_matrix(fixture_pair({0, 0, 0}), model), NumericalError);
}

TEST_CASE("minimum-image symmetry under lattice translations") {
    DipolarModel model;
    auto g = sample_positions(10, model, 5);
    auto j0 = coupling_matrix(g, model);
    EnsembleGeometry shifted = g;
    for (auto& p : shifted.positions) {
        p[0] += g.box_length;
        p[2] -= 2.0 * g.box_length;
    }
    auto j1 = coupling_matrix(shifted, model);
    for (std::size_t k = 0; k < j0.j.size(); ++k)
        CHECK(std::fabs(j0.j[k] - j1.j[k]) < 1e-12 * (1.0 + std::fabs(j0.j[k])));
}

TEST_CASE("excluded-volume sampling respects r_min and stays deterministic") {
    DipolarModel model;
    model.r_min = 0.3;
    auto g = sample_positions(64, model, 9);
    double min_r = 1e300;
    for (std::size_t i = 0; i < g.n; ++i)
        for (std::size_t j = i + 1; j < g.n; ++j) {
            double r2 = 0.0;
            for (int c = 0; c < 3; ++c) {
                double d = g.positions[i][c] - g.positions[j][c];
                d -= g.box_length * std::round(d / g.box_length);
                r2 += d * d;
            }
            min_r = std::min(min_r, std::sqrt(r2));
        }
    CHECK(min_r >= 0.3);
    auto again = sample_positions(64, model, 9);
    CHECK(again.positions == g.positions);
}

TEST_CASE("geometry debug export") {
    DipolarModel model;
    auto g = sample_positions(3, model, 12);
    auto csv = g.to_csv();
    CHECK(csv.rfind("index,x,y,z\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);  // header + 3 rows
}

TEST_CASE("Sachdev-Ye couplings") {
    auto m = sample_sy_couplings(18, 77);
    for (std::size_t i = 0; i < m.n; ++i) {
        CHECK(m(i, i) == 0.0);
        for (std::size_t j = 0; j < m.n; ++j) CHECK(m(i, j) == m(j, i));
    }
    CHECK_THROWS_AS(sample_sy_couplings(1, 0), InputError);

    // Var(J_12) = 2 J^2 / N = J^2 at N = 2
    double acc = 0.0, acc2 = 0.0;
    const int n_seeds = 100000;
    for (int s = 0; s < n_seeds; ++s) {
        double v = sample_sy_couplings(2, 1000 + s)(0, 1);
        acc += v;
        acc2 += v * v;
    }
    double mean = acc / n_seeds;
    double var = acc2 / n_seeds - mean * mean;
    CHECK(std::fabs(var - 1.0) < 0.02);

    // entry mean compatible with zero at N = 18
    const int n18 = 10000;
    double sum = 0.0, sumsq = 0.0;
    std::size_t cnt = 0;
    for (int s = 0; s < n18; ++s) {
        auto sy = sample_sy_couplings(18, 50000 + s);
        for (std::size_t i = 0; i < 18; ++i)
            for (std::size_t j = i + 1; j < 18; ++j) {
                sum += sy(i, j);
                sumsq += sy(i, j) * sy(i, j);
                ++cnt;
            }
    }
    double m0 = sum / cnt;
    double se = std::sqrt((sumsq / cnt - m0 * m0) / cnt);
    CHECK(std::fabs(m0) < 3.0 * se);
}
