#include <doctest.h>

#include <cmath>

#include "dxl/analysis/fit.hpp"
#include "dxl/analysis/protocol.hpp"
#include "dxl/core/reduce.hpp"
#include "dxl/dtwa/dtwa.hpp"
#include "dxl/exact/typicality.hpp"

using namespace dxl;

// Longer statistical checks kept out of the fast suite.

TEST_CASE("typicality concentration at N = 14") {
    DipolarModel model;
    auto geom = sample_positions(14, model, 2024);
    auto jm = coupling_matrix(geom, model);
    auto h = build_hamiltonian(jm, parameterize_lambda(0.5));
    auto grid = time_grid(2.0, 11);
    KrylovOptions opt;
    opt.substep = 0.02;  // concentration statistics are insensitive to the step

    const int n_seeds = 20;
    std::vector<std::vector<double>> runs(n_seeds);
    for (int s = 0; s < n_seeds; ++s)
        runs[s] = local_autocorrelator_typicality(h, {0}, grid, 9000 + s, opt)[0].value;

    for (std::size_t q = 0; q < grid.size(); ++q) {
        std::vector<double> col(n_seeds);
        for (int s = 0; s < n_seeds; ++s) col[s] = runs[s][q];
        auto ms = mean_stderr(col);
        double sd = ms.stderr_ * std::sqrt(static_cast<double>(n_seeds));
        CHECK(sd <= 0.02);
    }
}

TEST_CASE("dTWA agrees with the exact Ising oracle at scale") {
    DipolarModel model;
    model.r_min = 0.45;  // keep the strongest precession rates RK4-resolvable
    const std::size_t n = 32, m_geoms = 4;
    std::vector<CouplingMatrix> geoms;
    for (std::size_t r = 0; r < m_geoms; ++r)
        geoms.push_back(coupling_matrix(sample_positions(n, model, 600 + r), model));
    auto grid = time_grid(1.0, 11);
    DtwaOptions opt;
    opt.step = 0.005;
    auto traces =
        dtwa_correlator(WoottersKind::InfiniteTemperature, geoms, {0, 0, 1}, 256, grid, 42, opt);

    // exact per-site product of cosines on the same geometries
    const double kappa = 0.5;  // fixed here: the dTWA side never reads the calibration
    std::vector<double> exact(grid.size(), 0.0);
    for (const auto& jm : geoms)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t q = 0; q < grid.size(); ++q) {
                double p = 1.0;
                for (std::size_t j = 0; j < n; ++j)
                    if (j != i) p *= std::cos(kappa * jm(i, j) * grid[q]);
                exact[q] += p;
            }
    for (auto& v : exact) v /= static_cast<double>(n * m_geoms);

    for (std::size_t q = 0; q < grid.size(); ++q)
        CHECK(std::fabs(traces[0].value[q] - exact[q]) <=
              5.0 * traces[0].stderr_[q] + 2e-3);
}
