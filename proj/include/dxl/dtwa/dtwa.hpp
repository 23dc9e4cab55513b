#pragma once
#include <cstdint>
#include <vector>

#include "dxl/core/trace.hpp"
#include "dxl/model/anisotropy.hpp"
#include "dxl/model/dipolar.hpp"

namespace dxl {

enum class WoottersKind { Ramsey, InfiniteTemperature };

// Classical spin configuration; components start at +-1/2 (|s| = sqrt(3)/2).
struct ClassicalSpinConfig {
    std::size_t n = 0;
    std::vector<double> sx, sy, sz;
};

// One spin drawn uniformly from the 4-element Wootters ensemble per site.
ClassicalSpinConfig sample_initial_spins(WoottersKind kind, std::size_t n, std::uint64_t seed);

struct DtwaOptions {
    double step = 0.02;          // RK4 step, must be <= 0.02/J
    double norm_tol = 1e-6;      // allowed per-spin norm drift
};

// Mean-field equations ds_i/dt = b_i x s_i with b_i^mu = sum_j J_ij g_mu
// s_j^mu, integrated by fixed-step RK4. Returns the per-spin vectors at every
// grid time (series[t][i] = {sx, sy, sz}).
std::vector<std::vector<std::array<double, 3>>> integrate_trajectory(
    const ClassicalSpinConfig& config, const CouplingMatrix& couplings,
    const AnisotropyVector& g, const std::vector<double>& t_grid, const DtwaOptions& opt = {});

// Classical interaction energy of a configuration.
double dtwa_energy(const ClassicalSpinConfig& config, const CouplingMatrix& couplings,
                   const AnisotropyVector& g);

// Trajectory- and geometry-averaged correlators. InfiniteTemperature kind:
// C^{mumu}(t) = (4/N) sum_i <s_i^mu(t) s_i^mu(0)> for mu = X,Y,Z;
// Ramsey kind: a single trace (2/N) sum_i <s_i^x(t)>.
// Initial configurations are stratified over the joint Wootters assignments
// when 4^N divides n_t and N <= 8 (the estimator is then exact in the
// ensemble average); otherwise spins draw i.i.d.
std::vector<CorrelatorTrace> dtwa_correlator(WoottersKind kind,
                                             const std::vector<CouplingMatrix>& geometries,
                                             const AnisotropyVector& g, std::size_t n_t,
                                             const std::vector<double>& t_grid,
                                             std::uint64_t master_seed,
                                             const DtwaOptions& opt = {});

} // namespace dxl
