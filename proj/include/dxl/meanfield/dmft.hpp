#pragma once
#include <array>
#include <cstdint>
#include <vector>

#include "dxl/core/trace.hpp"
#include "dxl/model/anisotropy.hpp"
#include "dxl/model/dipolar.hpp"

namespace dxl {

struct MeanFieldOptions {
    std::size_t n_noise = 1000;  // noise instances per iteration
    double tol = 1e-2;           // L2 metric (1/T) int |dC|^2 between iterations
    int max_iter = 20;
    double damping = 0.5;        // kernel update D <- (1-eta) D + eta D_new
    double substep = 0.01;       // internal resolution, 1/J
    std::uint64_t seed = 0;
};

struct SelfConsistentResult {
    // per spin, traces for axes X, Y, Z on the requested grid
    std::vector<std::array<CorrelatorTrace, 3>> spins;
    std::vector<double> iteration_distance;  // max over spins/axes per iteration
    bool converged = false;
    int iterations = 0;
    std::vector<std::size_t> cluster_sizes;  // cdmft only

    // ensemble average over spins of one axis (stderr combined in quadrature / n)
    CorrelatorTrace ensemble_average(int axis) const;
};

// Single-site dynamical mean-field theory: every spin dephases under
// independent Gaussian fields whose stationary covariance is determined
// self-consistently, D_i^mu = kappa^2 g_mu^2 sum_j J_ij^2 C_j^mu(t).
SelfConsistentResult dmft_solve(const CouplingMatrix& couplings, const AnisotropyVector& g,
                                const std::vector<double>& t_grid, const MeanFieldOptions& opt);

} // namespace dxl
