#pragma once
#include <vector>

#include "dxl/core/trace.hpp"
#include "dxl/exact/hamiltonian.hpp"
#include "dxl/exact/krylov.hpp"

namespace dxl {

// Quantum-typicality estimate of the infinite-temperature local
// autocorrelators: one Haar state psi plus probe states phi_i^mu =
// sigma_i^mu psi, all propagated in lockstep;
// C^{mumu}(t) = (1/N) sum_i Re <psi(t)| sigma_i^mu |phi_i^mu(t)>.
std::vector<CorrelatorTrace> local_autocorrelator_typicality(
    const SectorBlockedHamiltonian& h, const std::vector<int>& axes,
    const std::vector<double>& t_grid, std::uint64_t seed, const KrylovOptions& opt = {});

// Global Ramsey decay (2/N) <S^x(t)> from the all-+x product state, via
// Krylov propagation (exact evolution path for N above the dense cap).
CorrelatorTrace global_ramsey_krylov(const SectorBlockedHamiltonian& h,
                                     const std::vector<double>& t_grid,
                                     const KrylovOptions& opt = {});

// Dispatches to the dense solver for N <= dense_cap, Krylov otherwise.
CorrelatorTrace global_ramsey(const SectorBlockedHamiltonian& h,
                              const std::vector<double>& t_grid, std::size_t dense_cap = 10);

} // namespace dxl
