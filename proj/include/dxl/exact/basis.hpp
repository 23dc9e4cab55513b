#pragma once
#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "dxl/core/errors.hpp"

namespace dxl {

using cxd = std::complex<double>;
using VectorXcd = Eigen::VectorXcd;
using MatrixXcd = Eigen::MatrixXcd;

// Computational basis of N spins split into total-S^z sectors (popcount of
// the bitstring = number of down spins). Sector k holds the ascending list of
// its bitstrings; pos_in_sector inverts that map.
struct SectorBasis {
    int n_spins = 0;
    std::vector<std::vector<std::uint32_t>> states;   // [sector][index] -> bitstring
    std::vector<std::uint32_t> pos_in_sector;         // [bitstring] -> index
    std::vector<std::size_t> dim;                     // per-sector dimension

    static SectorBasis build(int n) {
        SectorBasis b;
        b.n_spins = n;
        const std::size_t total = std::size_t{1} << n;
        b.states.resize(n + 1);
        b.pos_in_sector.resize(total);
        for (std::uint32_t s = 0; s < total; ++s) {
            int k = __builtin_popcount(s);
            b.pos_in_sector[s] = static_cast<std::uint32_t>(b.states[k].size());
            b.states[k].push_back(s);
        }
        b.dim.resize(n + 1);
        for (int k = 0; k <= n; ++k) b.dim[k] = b.states[k].size();
        return b;
    }

    int sectors() const { return n_spins + 1; }
};

// State stored per sector (some components may be empty).
struct BlockedState {
    std::vector<VectorXcd> block;  // indexed by sector

    double squared_norm() const {
        double s = 0.0;
        for (const auto& v : block) s += v.squaredNorm();
        return s;
    }
    double norm() const { return std::sqrt(squared_norm()); }
    void scale(double a) {
        for (auto& v : block) v *= a;
    }
};

inline BlockedState zero_state(const SectorBasis& basis) {
    BlockedState st;
    st.block.resize(basis.sectors());
    for (int k = 0; k < basis.sectors(); ++k) st.block[k] = VectorXcd::Zero(basis.dim[k]);
    return st;
}

// sigma_i^mu |psi>. X and Y shift the sector by +-1; Z is diagonal.
inline BlockedState apply_sigma(const SectorBasis& basis, const BlockedState& st, int site,
                                int axis) {
    BlockedState out = zero_state(basis);
    const std::uint32_t bit = std::uint32_t{1} << site;
    for (int k = 0; k < basis.sectors(); ++k) {
        const auto& src = st.block[k];
        if (src.size() == 0) continue;
        const auto& list = basis.states[k];
        if (axis == 2) {
            for (std::size_t a = 0; a < list.size(); ++a)
                out.block[k][a] = ((list[a] & bit) ? -1.0 : 1.0) * src[a];
            continue;
        }
        for (std::size_t a = 0; a < list.size(); ++a) {
            std::uint32_t b = list[a];
            std::uint32_t flipped = b ^ bit;
            int k2 = (b & bit) ? k - 1 : k + 1;
            std::uint32_t pos = basis.pos_in_sector[flipped];
            if (axis == 0) {
                out.block[k2][pos] += src[a];
            } else {
                // sigma^y |0> = i|1>, sigma^y |1> = -i|0>
                out.block[k2][pos] += ((b & bit) ? cxd(0, -1) : cxd(0, 1)) * src[a];
            }
        }
    }
    return out;
}

inline cxd dot(const BlockedState& a, const BlockedState& b) {
    cxd s = 0.0;
    for (std::size_t k = 0; k < a.block.size(); ++k)
        if (a.block[k].size() && b.block[k].size()) s += a.block[k].dot(b.block[k]);
    return s;
}

} // namespace dxl
