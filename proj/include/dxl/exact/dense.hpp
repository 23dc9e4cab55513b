#pragma once
#include <vector>

#include "dxl/core/trace.hpp"
#include "dxl/exact/hamiltonian.hpp"

namespace dxl {

inline constexpr std::size_t kDenseSpinCap = 10;

// Exact spectral evolution. XXZ Hamiltonians are diagonalized sector by
// sector; XYZ ones as a single dense block (N <= cap either way).
class DenseSolver {
public:
    explicit DenseSolver(const SectorBlockedHamiltonian& h, std::size_t spin_cap = kDenseSpinCap);

    // Infinite-temperature local autocorrelators (1/N) sum_i Tr(sig_i(t) sig_i)/Tr(1),
    // one trace per requested axis (0=X, 1=Y, 2=Z). Exact.
    std::vector<CorrelatorTrace> local_correlators(const std::vector<int>& axes,
                                                   const std::vector<double>& t_grid) const;

    // Global Ramsey decay (2/N) <S^x(t)> from the all-+x product state.
    CorrelatorTrace ramsey(const std::vector<double>& t_grid) const;

    // Exact evolution of an arbitrary state to time t.
    BlockedState evolve(const BlockedState& psi0, double t) const;

    // Split evolution: spectral coefficients once, then cheap per-time phases.
    std::vector<VectorXcd> to_eigenbasis(const BlockedState& psi) const;
    BlockedState from_eigenbasis_at_time(const std::vector<VectorXcd>& coeffs, double t) const;

    const SectorBlockedHamiltonian& hamiltonian() const { return h_; }

private:
    SectorBlockedHamiltonian h_;  // owned; callers may pass temporaries
    bool merged_ = false;                    // XYZ: one block over the full space
    std::vector<Eigen::VectorXd> eval_;      // per sector (or single entry when merged)
    std::vector<Eigen::MatrixXd> evec_;
    std::vector<std::size_t> offset_;        // sector offsets in the merged layout

    BlockedState from_merged(const Eigen::VectorXcd& full) const;
    Eigen::VectorXcd to_merged(const BlockedState& st) const;
};

// Product state polarized along +x (all sectors occupied).
BlockedState plus_x_state(const SectorBasis& basis);

// Haar-random state: i.i.d. complex normal components, normalized.
BlockedState haar_state(const SectorBasis& basis, std::uint64_t seed);

} // namespace dxl
