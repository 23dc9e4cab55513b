#include "dxl/exact/hamiltonian.hpp"

#include <cmath>

#include "dxl/core/errors.hpp"

namespace dxl {

namespace {

struct RowEntry {
    std::uint32_t col_state;
    double val;
    int dsector;  // 0 or +-2
};

// Matrix elements out of basis state b. Diagonal: (1/4) sum J g_z z_i z_j.
// Double flip between anti-aligned bits: (J/4)(g_x + g_y), same sector.
// Double flip between aligned bits: (J/4)(g_x - g_y), sector +-2.
void build_row(std::uint32_t b, const CouplingMatrix& jm, const AnisotropyVector& g,
               std::vector<RowEntry>& out) {
    const std::size_t n = jm.n;
    out.clear();
    double diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const bool bi = (b >> i) & 1u;
        const double zi = bi ? -1.0 : 1.0;
        const double* jrow = jm.row(i);
        for (std::size_t k = i + 1; k < n; ++k) {
            const double j = jrow[k];
            if (j == 0.0) continue;
            const bool bk = (b >> k) & 1u;
            const double zk = bk ? -1.0 : 1.0;
            diag += 0.25 * j * g.z * zi * zk;
            const bool aligned = bi == bk;
            const double amp = 0.25 * j * (aligned ? (g.x - g.y) : (g.x + g.y));
            if (amp != 0.0) {
                int ds = aligned ? (bi ? -2 : 2) : 0;
                out.push_back({b ^ ((1u << i) | (1u << k)), amp, ds});
            }
        }
    }
    if (diag != 0.0) out.push_back({b, diag, 0});
}

void finish_block(SparseBlock& blk, std::size_t rows, std::size_t cols) {
    blk.rows = rows;
    blk.cols = cols;
    if (blk.row_ptr.empty()) blk.row_ptr.assign(rows + 1, 0);
}

} // namespace

SectorBlockedHamiltonian build_hamiltonian(const CouplingMatrix& couplings,
                                           const AnisotropyVector& g, std::size_t spin_cap) {
    const std::size_t n = couplings.n;
    if (n > spin_cap)
        throw ResourceError("build_hamiltonian: N = " + std::to_string(n) +
                            " exceeds the spin cap " + std::to_string(spin_cap));
    if (!std::isfinite(g.x) || !std::isfinite(g.y) || !std::isfinite(g.z))
        throw InputError("anisotropy vector must be finite");

    SectorBlockedHamiltonian h;
    h.n = n;
    h.g = g;
    h.couplings = couplings;
    h.basis = SectorBasis::build(static_cast<int>(n));
    h.sector_blocked = (g.x == g.y);

    const int ns = h.basis.sectors();
    h.within.resize(ns);
    h.from_below.resize(ns);
    h.from_above.resize(ns);

    std::vector<RowEntry> row;
    for (int k = 0; k < ns; ++k) {
        SparseBlock& w = h.within[k];
        SparseBlock& lo = h.from_below[k];
        SparseBlock& hi = h.from_above[k];
        const std::size_t dk = h.basis.dim[k];
        w.row_ptr.assign(dk + 1, 0);
        lo.row_ptr.assign(dk + 1, 0);
        hi.row_ptr.assign(dk + 1, 0);
        for (std::size_t a = 0; a < dk; ++a) {
            // entries of row a seen from the TARGET side: we need H_{(k,a),*},
            // i.e. all b with <a|H|b>. H is symmetric and build_row lists
            // <b'|H|b> for b in sector k; symmetric entries land in the right
            // blocks because build_row from state a gives exactly <a|H|b'>.
            build_row(h.basis.states[k][a], couplings, g, row);
            for (const auto& e : row) {
                SparseBlock& dst = e.dsector == 0 ? w : (e.dsector < 0 ? lo : hi);
                dst.col.push_back(h.basis.pos_in_sector[e.col_state]);
                dst.val.push_back(e.val);
            }
            w.row_ptr[a + 1] = w.col.size();
            lo.row_ptr[a + 1] = lo.col.size();
            hi.row_ptr[a + 1] = hi.col.size();
        }
        finish_block(w, dk, dk);
        finish_block(lo, dk, k >= 2 ? h.basis.dim[k - 2] : 0);
        finish_block(hi, dk, k + 2 < ns ? h.basis.dim[k + 2] : 0);
    }
    return h;
}

void apply_hamiltonian(const SectorBlockedHamiltonian& h, const BlockedState& x, BlockedState& y) {
    const int ns = h.basis.sectors();
    y.block.resize(ns);
    for (int k = 0; k < ns; ++k) {
        const bool occupied =
            x.block[k].size() != 0 ||
            (!h.sector_blocked && ((k >= 2 && x.block[k - 2].size() != 0) ||
                                   (k + 2 < ns && x.block[k + 2].size() != 0)));
        if (!occupied) {
            y.block[k].resize(0);
            continue;
        }
        y.block[k] = VectorXcd::Zero(h.basis.dim[k]);
        if (x.block[k].size() != 0) h.within[k].accumulate(x.block[k], y.block[k]);
        if (!h.sector_blocked) {
            if (k >= 2 && x.block[k - 2].size() != 0)
                h.from_below[k].accumulate(x.block[k - 2], y.block[k]);
            if (k + 2 < ns && x.block[k + 2].size() != 0)
                h.from_above[k].accumulate(x.block[k + 2], y.block[k]);
        }
    }
}

} // namespace dxl
