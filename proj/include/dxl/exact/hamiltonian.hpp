#pragma once
#include <vector>

#include "dxl/exact/basis.hpp"
#include "dxl/model/anisotropy.hpp"
#include "dxl/model/dipolar.hpp"

namespace dxl {

// Real CSR block mapping a source sector into a target sector.
struct SparseBlock {
    std::size_t rows = 0, cols = 0;
    std::vector<std::size_t> row_ptr;
    std::vector<std::uint32_t> col;
    std::vector<double> val;

    bool empty() const { return val.empty(); }

    // y += A x
    void accumulate(const VectorXcd& x, VectorXcd& y) const {
        for (std::size_t r = 0; r < rows; ++r) {
            cxd acc = 0.0;
            for (std::size_t p = row_ptr[r]; p < row_ptr[r + 1]; ++p) acc += val[p] * x[col[p]];
            y[r] += acc;
        }
    }
};

// H = sum_{i<j} J_ij sum_mu g_mu S_i^mu S_j^mu with S = sigma/2, stored in
// total-S^z sector layout. The S^z S^z and flip-flop channels stay within a
// sector; the pair channel (amplitude (g_x - g_y)/4 J_ij) connects sectors
// k <-> k+2 and vanishes identically for XXZ anisotropies, which makes every
// sector exactly invariant.
struct SectorBlockedHamiltonian {
    std::size_t n = 0;
    AnisotropyVector g;
    CouplingMatrix couplings;
    SectorBasis basis;
    bool sector_blocked = false;       // true iff g_x == g_y
    std::vector<SparseBlock> within;   // [k]: sector k -> k
    std::vector<SparseBlock> from_below;  // [k]: sector k-2 -> k (empty when blocked)
    std::vector<SparseBlock> from_above;  // [k]: sector k+2 -> k (empty when blocked)

    std::size_t dimension() const { return std::size_t{1} << n; }
};

inline constexpr std::size_t kDefaultSpinCap = 20;

SectorBlockedHamiltonian build_hamiltonian(const CouplingMatrix& couplings,
                                           const AnisotropyVector& g,
                                           std::size_t spin_cap = kDefaultSpinCap);

// y = H x (y resized to match x's sector occupancy pattern; for unblocked
// Hamiltonians neighbours of occupied sectors become occupied).
void apply_hamiltonian(const SectorBlockedHamiltonian& h, const BlockedState& x, BlockedState& y);

} // namespace dxl
