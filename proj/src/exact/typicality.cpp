#include "dxl/exact/typicality.hpp"

#include <cmath>

#include "dxl/core/parallel.hpp"
#include "dxl/exact/dense.hpp"

namespace dxl {

std::vector<CorrelatorTrace> local_autocorrelator_typicality(
    const SectorBlockedHamiltonian& h, const std::vector<int>& axes,
    const std::vector<double>& t_grid, std::uint64_t seed, const KrylovOptions& opt) {
    const std::size_t n = h.n;
    const std::size_t n_axes = axes.size();

    // state 0: psi; state 1 + a*N + i: sigma_i^{axes[a]} psi
    std::vector<BlockedState> states(1 + n_axes * n);
    states[0] = haar_state(h.basis, seed);
    for (std::size_t a = 0; a < n_axes; ++a)
        for (std::size_t i = 0; i < n; ++i)
            states[1 + a * n + i] =
                apply_sigma(h.basis, states[0], static_cast<int>(i), axes[a]);

    std::vector<CorrelatorTrace> traces(n_axes);
    for (std::size_t a = 0; a < n_axes; ++a) {
        traces[a].axis = axes[a] == 0 ? "XX" : (axes[a] == 1 ? "YY" : "ZZ");
        traces[a].time = t_grid;
        traces[a].value.assign(t_grid.size(), 0.0);
        traces[a].meta["solver"] = "krylov-typicality";
        traces[a].meta["seed"] = std::to_string(seed);
    }

    auto record = [&](std::size_t q) {
        for (std::size_t a = 0; a < n_axes; ++a) {
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                BlockedState probe =
                    apply_sigma(h.basis, states[0], static_cast<int>(i), axes[a]);
                acc += dot(probe, states[1 + a * n + i]).real();
            }
            traces[a].value[q] = acc / static_cast<double>(n);
        }
    };

    record(0);
    for (std::size_t q = 1; q < t_grid.size(); ++q) {
        const double span = t_grid[q] - t_grid[q - 1];
        const int nsub = std::max(1, static_cast<int>(std::ceil(span / opt.substep - 1e-12)));
        const double dt = span / nsub;
        parallel_for(states.size(), [&](std::size_t s) {
            for (int u = 0; u < nsub; ++u) krylov_propagate(h, states[s], dt, opt);
        });
        record(q);
    }
    return traces;
}

CorrelatorTrace global_ramsey_krylov(const SectorBlockedHamiltonian& h,
                                     const std::vector<double>& t_grid,
                                     const KrylovOptions& opt) {
    BlockedState psi = plus_x_state(h.basis);
    CorrelatorTrace tr;
    tr.axis = "ramsey";
    tr.time = t_grid;
    tr.value.assign(t_grid.size(), 0.0);
    tr.meta["solver"] = "krylov";

    auto measure = [&](std::size_t q) {
        double s = 0.0;
        for (std::size_t i = 0; i < h.n; ++i)
            s += dot(psi, apply_sigma(h.basis, psi, static_cast<int>(i), 0)).real();
        tr.value[q] = s / static_cast<double>(h.n);
    };

    measure(0);
    for (std::size_t q = 1; q < t_grid.size(); ++q) {
        const double span = t_grid[q] - t_grid[q - 1];
        const int nsub = std::max(1, static_cast<int>(std::ceil(span / opt.substep - 1e-12)));
        const double dt = span / nsub;
        for (int u = 0; u < nsub; ++u) krylov_propagate(h, psi, dt, opt);
        measure(q);
    }
    return tr;
}

CorrelatorTrace global_ramsey(const SectorBlockedHamiltonian& h, const std::vector<double>& t_grid,
                              std::size_t dense_cap) {
    if (h.n <= dense_cap) {
        DenseSolver solver(h, dense_cap);
        return solver.ramsey(t_grid);
    }
    return global_ramsey_krylov(h, t_grid);
}

} // namespace dxl
